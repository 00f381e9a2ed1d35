#pragma once

// Secret-key quantities for the no-signalling adversary: one-way rates with
// local pre-processing, advantage-distillation conditions, intrinsic
// information (closed forms and numeric channel minimization), and the
// generic-d bounds on the symmetric slice.

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "correlations.hpp"
#include "optimize.hpp"
#include "protocol.hpp"

namespace nosig {

// ---------------------------------------------------------------------------
// Shannon machinery

inline double entropy(const std::vector<double>& dist, double base) {
    double h = 0.0, sum = 0.0;
    for (double v : dist) {
        if (v < -1e-12) throw std::domain_error("entropy: negative probability");
        if (v > 0.0) h -= v * std::log(v);
        sum += v;
    }
    if (sum > 1.0 + 1e-12) throw std::domain_error("entropy: probabilities exceed 1");
    return h / std::log(base);
}

inline double binary_h(double q) {
    if (q <= 0.0 || q >= 1.0) {
        if (q < -1e-12 || q > 1.0 + 1e-12) throw std::domain_error("binary_h: q outside [0,1]");
        return 0.0;
    }
    return -q * std::log2(q) - (1.0 - q) * std::log2(1.0 - q);
}

inline double h3(const std::vector<double>& t) { return entropy(t, 3.0); }

// ---------------------------------------------------------------------------

struct KeyRateReport {
    double rate = 0.0;       // native units (bits for d=2, trits for d=3, dits generic)
    double bits = 0.0;       // same rate converted to bits
    double q = 0.0;          // Bob's (or Alice's) flip probability used
    double qA = 0.0, qB = 0.0;
    double e_ab = 0.0;       // error rate entering the rate (after pre-processing)
    double i_ab = 0.0;       // I(A:B') in native units
    double i_be = 0.0;       // Eve's term in native units
};

// One-way rate for the d=2 isotropic family: e_AB = p_L/4,
// rate = 1 - h(e') - (p_L/2)(1 - h(q)) with e' = (1-q)e + q(1-e).
inline KeyRateReport ck_isotropic(double p_nl, double q) {
    if (p_nl < 0.0 || p_nl > 1.0) throw std::domain_error("ck_isotropic: p_nl outside [0,1]");
    if (q < 0.0 || q > 0.5) throw std::domain_error("ck_isotropic: q outside [0,1/2]");
    double p_l = 1.0 - p_nl;
    double e = p_l / 4.0;
    double ep = (1.0 - q) * e + q * (1.0 - e);
    KeyRateReport r;
    r.q = q;
    r.e_ab = ep;
    r.i_ab = 1.0 - binary_h(ep);
    r.i_be = (p_l / 2.0) * (1.0 - binary_h(q));
    r.rate = r.i_ab - r.i_be;
    r.bits = r.rate;
    return r;
}

// q = 1/2 zeroes both sides identically (flipping every bit), so the search
// stops just short of it; otherwise the zero-rate crossing would be masked.
inline constexpr double kQMax = 0.499;

inline KeyRateReport ck_isotropic_opt(double p_nl) {
    auto obj = [&](double q) { return ck_isotropic(p_nl, q).rate; };
    auto best = opt::grid_golden_max(obj, 0.0, kQMax, 100, 1e-6);
    return ck_isotropic(p_nl, best.x);
}

// Zero-rate crossing in p_nl for the isotropic one-way rate.
inline double ck_isotropic_threshold(bool optimize_q, double tol = 1e-6) {
    auto f = [&](double p) {
        return optimize_q ? ck_isotropic_opt(p).rate : ck_isotropic(p, 0.0).rate;
    };
    return opt::bisect(f, 1e-9, 1.0, tol);
}

// One-way rate when Eve is limited only by the no-signalling facet:
// r = 1 - h(p_L/2)/2 - p_L/2, positive for all p_L < 1.
inline double ck_bell_limit(double p_l) {
    if (p_l < 0.0 || p_l > 1.0) throw std::domain_error("ck_bell_limit: p_l outside [0,1]");
    return 1.0 - 0.5 * binary_h(p_l / 2.0) - p_l / 2.0;
}

// ---------------------------------------------------------------------------
// Advantage distillation (d=2 isotropic)

// Block-protocol success condition: Eve's random-guess fraction must beat
// Bob's block error asymptotically, f(e) > e/(1-e).
inline bool ad_condition(double e_ab, double f_value) {
    if (e_ab < 0.0 || e_ab >= 0.5) throw std::domain_error("ad_condition: e_ab outside [0,1/2)");
    return f_value > e_ab / (1.0 - e_ab);
}

inline bool ad_isotropic(double p_nl) {
    double e = (1.0 - p_nl) / 4.0;
    return ad_condition(e, p_nl / (1.0 - e));
}

// The condition reduces to p_nl > p_l/4, i.e. p_nl = 1/5 at equality.
inline double ad_isotropic_threshold(double tol = 1e-9) {
    return opt::bisect([](double p) { return p - (1.0 - p) / 4.0; }, 0.0, 1.0, tol);
}

// Finite-block diagnostics: Bob's and Eve's error on accepted N-blocks.
struct AdBlockErrors {
    double e_ab_block;  // e^N / ((1-e)^N + e^N)
    double e_e_block;   // (1/2) (p_nl/(1-e))^N
};

inline AdBlockErrors ad_block_errors(double p_nl, int n) {
    double e = (1.0 - p_nl) / 4.0;
    double num = std::pow(e, n);
    return {num / (std::pow(1.0 - e, n) + num),
            0.5 * std::pow(p_nl / (1.0 - e), n)};
}

// Margin of the pre-processed condition delta_(?,?) + 2 delta_1 + 2 delta_2
// > e'_AB for the isotropic family with flips qA, qB.
inline double ad_preprocessing_margin(double p_nl, double qA, double qB) {
    if (qA < 0.0 || qA > 0.5 || qB < 0.0 || qB > 0.5)
        throw std::domain_error("ad_preprocessing_margin: flips outside [0,1/2]");
    double p_l = 1.0 - p_nl;
    double ep = (p_nl + p_l / 2.0) * (qA * (1.0 - qB) + (1.0 - qA) * qB) + p_l / 4.0;
    double d_nn = p_nl * ((1.0 - qA) * (1.0 - qB) + qA * qB);
    double d1 = (p_l / 4.0) * std::sqrt((1.0 - qA) * qA);
    double d2 = (p_l / 2.0) * std::sqrt((1.0 - qA) * qA) * std::sqrt((1.0 - qB) * qB);
    return d_nn + 2.0 * d1 + 2.0 * d2 - ep;
}

struct AdPreprocessingResult {
    double margin;
    double qA, qB;
};

// Grid (step 0.005) then coordinate descent on (qA, qB).
inline AdPreprocessingResult ad_preprocessing_opt(double p_nl) {
    AdPreprocessingResult best{-std::numeric_limits<double>::infinity(), 0.0, 0.0};
    // same degenerate point as in ck_isotropic_opt: the margin vanishes
    // identically at qA = qB = 1/2, so stay below kQMax
    for (int i = 0; i <= 99; ++i)
        for (int j = 0; j <= 99; ++j) {
            double qa = 0.005 * i, qb = 0.005 * j;
            double m = ad_preprocessing_margin(p_nl, qa, qb);
            if (m > best.margin) best = {m, qa, qb};
        }
    for (int pass = 0; pass < 8; ++pass) {
        auto ra = opt::golden_max(
            [&](double qa) { return ad_preprocessing_margin(p_nl, qa, best.qB); },
            std::max(0.0, best.qA - 0.01), std::min(kQMax, best.qA + 0.01), 1e-7);
        if (ra.value > best.margin) {
            best.qA = ra.x;
            best.margin = ra.value;
        }
        auto rb = opt::golden_max(
            [&](double qb) { return ad_preprocessing_margin(p_nl, best.qA, qb); },
            std::max(0.0, best.qB - 0.01), std::min(kQMax, best.qB + 0.01), 1e-7);
        if (rb.value > best.margin) {
            best.qB = rb.x;
            best.margin = rb.value;
        }
    }
    return best;
}

// Smallest p_nl whose optimized margin is positive.
inline double ad_preprocessing_threshold(double tol = 1e-5) {
    return opt::bisect([](double p) { return ad_preprocessing_opt(p).margin; }, 0.01, 0.5, tol);
}

// ---------------------------------------------------------------------------
// Intrinsic information

// Closed form for the d=2 isotropic family under the map sending Eve's
// partial symbols to ignorance: (1 - p_L/2)(1 - h(p_L/(4-2p_L))).
inline double intrinsic_info_chsh(double p_nl) {
    if (p_nl < 0.0 || p_nl > 1.0)
        throw std::domain_error("intrinsic_info_chsh: p_nl outside [0,1]");
    double p_l = 1.0 - p_nl;
    return (1.0 - p_l / 2.0) * (1.0 - binary_h(p_l / (4.0 - 2.0 * p_l)));
}

using EveChannel = std::vector<std::vector<double>>;  // row-stochastic

inline void check_channel(const EveChannel& c) {
    for (const auto& row : c) {
        double s = 0.0;
        for (double v : row) {
            if (v < -1e-12) throw std::domain_error("EveChannel: negative entry");
            s += v;
        }
        if (std::abs(s - 1.0) > 1e-12) throw std::domain_error("EveChannel: row not normalized");
    }
}

// I(A:B|E-bar) after pushing Eve's symbol through the channel.
inline double channel_cmi(const JointABE& j, const EveChannel& c) {
    const int d = j.d;
    const std::size_t n = j.symbols.size();
    double info = 0.0;
    for (std::size_t eb = 0; eb < n; ++eb) {
        double pe = 0.0;
        std::vector<double> pa(d, 0.0), pb(d, 0.0);
        std::vector<std::vector<double>> pab(d, std::vector<double>(d, 0.0));
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                double v = 0.0;
                for (std::size_t e = 0; e < n; ++e) v += j.p[a][b][e] * c[e][eb];
                pab[a][b] = v;
                pa[a] += v;
                pb[b] += v;
                pe += v;
            }
        if (pe <= 1e-300) continue;
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                if (pab[a][b] > 0.0)
                    info += pab[a][b] *
                            std::log2(pab[a][b] * pe / (pa[a] * pb[b]));
    }
    return info;
}

// Channel implementing the conjectured optimal map: every partial symbol is
// sent to the ignorance symbol (with probability lambda), others untouched.
inline EveChannel partial_to_none_channel(const std::vector<EveSymbol>& symbols,
                                          double lambda = 1.0) {
    std::size_t n = symbols.size();
    std::size_t none_idx = n;
    for (std::size_t i = 0; i < n; ++i)
        if (symbols[i].kind == EveKind::None) none_idx = i;
    EveChannel c(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        if (symbols[i].kind == EveKind::Partial && none_idx < n) {
            c[i][none_idx] = lambda;
            c[i][i] = 1.0 - lambda;
        } else {
            c[i][i] = 1.0;
        }
    }
    return c;
}

struct IntrinsicResult {
    double value = 0.0;
    EveChannel channel;
    bool converged = false;
    long iterations = 0;
};

// Minimization of I(A:B|E-bar) over same-size row-stochastic channels:
// multi-start (identity, the conjectured map, random seeds) refined by
// pairwise mass transfers with golden-section line search. The budget counts
// line searches across all starts.
inline IntrinsicResult intrinsic_info_numeric(const JointABE& j, int random_starts = 50,
                                              std::uint64_t seed = 20060915,
                                              long iter_budget = 10000) {
    const std::size_t n = j.symbols.size();
    IntrinsicResult res;
    res.value = std::numeric_limits<double>::infinity();
    long iters = 0;

    auto refine = [&](EveChannel c) {
        double v = channel_cmi(j, c);
        bool improved = true;
        while (improved && iters < iter_budget) {
            improved = false;
            for (std::size_t r = 0; r < n && iters < iter_budget; ++r)
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t k = i + 1; k < n; ++k) {
                        // shift mass t from column i to column k in row r
                        double lo = -c[r][k], hi = c[r][i];
                        if (hi - lo < 1e-12) continue;
                        ++iters;
                        auto g = [&](double t) {
                            EveChannel cc = c;
                            cc[r][i] -= t;
                            cc[r][k] += t;
                            return -channel_cmi(j, cc);
                        };
                        auto bst = opt::golden_max(g, lo, hi, 1e-6);
                        if (-bst.value < v - 1e-12) {
                            c[r][i] -= bst.x;
                            c[r][k] += bst.x;
                            v = -bst.value;
                            improved = true;
                        }
                    }
        }
        if (v < res.value) {
            res.value = v;
            res.channel = c;
        }
        return v;
    };

    EveChannel ident(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) ident[i][i] = 1.0;
    refine(ident);
    refine(partial_to_none_channel(j.symbols));

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int s = 0; s < random_starts && iters < iter_budget; ++s) {
        EveChannel c(n, std::vector<double>(n));
        for (auto& row : c) {
            double tot = 0.0;
            for (auto& v : row) {
                v = -std::log(1.0 - u(rng));
                tot += v;
            }
            for (auto& v : row) v /= tot;
        }
        refine(c);
    }
    res.converged = iters < iter_budget;
    res.iterations = iters;
    res.value = std::max(0.0, res.value);
    return res;
}

// Minimum of I(A:B|E-bar) over the one-parameter family that applies the
// partial-to-ignorance map with probability lambda. For d=3 slice points on
// or below the line 5p0 - 2p1 - 3 = 0 the minimum vanishes at some lambda.
inline opt::ScalarResult lambda_map_minimum(const JointABE& j, int grid = 200) {
    auto f = [&](double lam) {
        return -channel_cmi(j, partial_to_none_channel(j.symbols, lam));
    };
    auto r = opt::grid_golden_max(f, 0.0, 1.0, grid, 1e-9);
    return {r.x, -r.value};
}

// ---------------------------------------------------------------------------
// d=3 slice quantities

inline void check_d3_triangle(double p0, double p1) {
    double p2 = 1.0 - p0 - p1;
    double p_nl = 2.0 * (p0 - p1) - 1.0;
    if (p1 < -1e-12 || p2 < -1e-12 || p_nl < -1e-12)
        throw std::domain_error("d=3 slice point outside the nonlocal triangle");
}

// One-way rate in trits. Eve holds full information for one setting and a
// two-way hesitation for the other whenever she sent a local point, so her
// term carries the overall local weight p_L.
inline KeyRateReport ck_d3(double p0, double p1, double q) {
    check_d3_triangle(p0, p1);
    if (q < 0.0 || q > 0.5) throw std::domain_error("ck_d3: q outside [0,1/2]");
    double p_nl = 2.0 * (p0 - p1) - 1.0;
    double p_l = 1.0 - p_nl;
    double ep = (1.0 - p0) + q * (3.0 * p0 - 1.0);
    double h1 = h3({1.0 - 2.0 * q, q, q});
    double h2 = h3({(1.0 - q) / 2.0, (1.0 - q) / 2.0, q});
    KeyRateReport r;
    r.q = q;
    r.e_ab = ep;
    r.i_ab = 1.0 - h3({1.0 - ep, ep / 2.0, ep / 2.0});
    r.i_be = p_l * (1.0 - 0.5 * (h1 + h2));
    r.rate = r.i_ab - r.i_be;
    r.bits = r.rate * std::log2(3.0);
    return r;
}

inline KeyRateReport ck_d3_opt(double p0, double p1) {
    auto obj = [&](double q) { return ck_d3(p0, p1, q).rate; };
    auto best = opt::grid_golden_max(obj, 0.0, 0.5, 100, 1e-6);
    return ck_d3(p0, p1, best.x);
}

// Two-way condition 5 p0 > 4 p1 + 3, i.e. p_nl > (1-p0)/2.
inline bool ad_d3(double p0, double p1) {
    check_d3_triangle(p0, p1);
    return 5.0 * p0 > 4.0 * p1 + 3.0;
}

struct IntrinsicZeroRegion {
    double upper_bound;   // cmi after mapping all partial symbols to ignorance
    double linear_form;   // 5 p0 - 2 p1 - 3
    bool in_zero_region;  // linear_form <= 0
};

// Upper bound on the intrinsic information for d=3 slice points: map every
// (i,?) symbol to (?,?). Vanishes exactly on 5p0 - 2p1 - 3 = 0.
inline IntrinsicZeroRegion intrinsic_zero_region_d3(double p0, double p1) {
    check_d3_triangle(p0, p1);
    double denom = p0 - p1;  // = P(?,?) after the map = (2 - p_L)/2
    IntrinsicZeroRegion r;
    r.linear_form = 5.0 * p0 - 2.0 * p1 - 3.0;
    r.in_zero_region = r.linear_form <= 1e-12;
    if (denom <= 0.0) {
        r.upper_bound = 0.0;
        return r;
    }
    double v0 = (2.0 * p0 - p1 - 1.0) / denom;
    double v1 = (1.0 - p0) / (2.0 * denom);
    r.upper_bound = denom * (1.0 - h3({v0, v1, v1}));
    return r;
}

// ---------------------------------------------------------------------------
// Generic d bounds on the slice

// r = 1 - h({e(Delta)}) - I_E in dits, with I_E = p_L (1 - (log_d 2)/2).
inline KeyRateReport generic_d_oneway(const SlicePoint& sp) {
    double p_nl = sp.p_nl();
    if (p_nl < -1e-12) throw std::domain_error("generic_d_oneway: p_nl < 0");
    double p_l = 1.0 - p_nl;
    auto e = sp.error_profile();
    KeyRateReport r;
    r.i_ab = 1.0 - entropy(e, double(sp.d));
    r.i_be = p_l * (1.0 - 0.5 * (std::log(2.0) / std::log(double(sp.d))));
    r.rate = r.i_ab - r.i_be;
    r.bits = r.rate * std::log2(double(sp.d));
    r.e_ab = 1.0 - e[0];
    return r;
}

// Two-way condition p_nl > max_{Delta != 0} e(Delta).
inline bool generic_d_ad(const SlicePoint& sp) {
    double p_nl = sp.p_nl();
    auto e = sp.error_profile();
    double m = 0.0;
    for (int delta = 1; delta < sp.d; ++delta) m = std::max(m, e[delta]);
    return p_nl > m;
}

}  // namespace nosig
