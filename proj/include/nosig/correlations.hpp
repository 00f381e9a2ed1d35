#pragma once

// No-signalling correlation tables for two binary inputs and d-ary outputs:
// validation, CHSH/CGLMP inequality values, deterministic strategies on the
// CGLMP facet, the symmetric slice, depolarization onto it, and the
// decomposition of slice points into extremal mixtures.

#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nosig {

inline constexpr double kProbTol = 1e-12;

inline int mod(int v, int d) {
    int r = v % d;
    return r < 0 ? r + d : r;
}

// Conditional distribution P(a,b|x,y), a,b in {0..d-1}, x,y in {0,1}.
class CorrelationTable {
public:
    explicit CorrelationTable(int d) : d_(d), p_(std::size_t(4) * d * d, 0.0) {
        if (d < 2) throw std::invalid_argument("CorrelationTable: d must be >= 2");
    }

    int d() const { return d_; }

    double& at(int a, int b, int x, int y) { return p_[index(a, b, x, y)]; }
    double at(int a, int b, int x, int y) const { return p_[index(a, b, x, y)]; }

    double marginal_a(int a, int x, int y = 0) const {
        double s = 0.0;
        for (int b = 0; b < d_; ++b) s += at(a, b, x, y);
        return s;
    }
    double marginal_b(int b, int y, int x = 0) const {
        double s = 0.0;
        for (int a = 0; a < d_; ++a) s += at(a, b, x, y);
        return s;
    }

private:
    std::size_t index(int a, int b, int x, int y) const {
        return ((std::size_t(x) * 2 + y) * d_ + a) * d_ + b;
    }
    int d_;
    std::vector<double> p_;
};

struct ValidationReport {
    double normalization = 0.0;  // max |sum_ab P - 1| over (x,y)
    double no_signalling = 0.0;  // max marginal mismatch between remote inputs
    double negativity = 0.0;     // max(0, -min entry)

    bool ok(double tol = kProbTol) const {
        return normalization <= tol && no_signalling <= tol && negativity <= tol;
    }
};

inline ValidationReport validate(const CorrelationTable& t) {
    ValidationReport r;
    const int d = t.d();
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            double s = 0.0;
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) {
                    double v = t.at(a, b, x, y);
                    s += v;
                    if (v < 0) r.negativity = std::max(r.negativity, -v);
                }
            r.normalization = std::max(r.normalization, std::abs(s - 1.0));
        }
    for (int x = 0; x < 2; ++x)
        for (int a = 0; a < d; ++a)
            r.no_signalling = std::max(
                r.no_signalling, std::abs(t.marginal_a(a, x, 0) - t.marginal_a(a, x, 1)));
    for (int y = 0; y < 2; ++y)
        for (int b = 0; b < d; ++b)
            r.no_signalling = std::max(
                r.no_signalling, std::abs(t.marginal_b(b, y, 0) - t.marginal_b(b, y, 1)));
    return r;
}

// CHSH = sum_{x,y} P(a+b=xy|x,y), algebraic maximum 4, local bound 3.
inline double chsh_value(const CorrelationTable& t) {
    if (t.d() != 2) throw std::domain_error("chsh_value: requires d = 2");
    double s = 0.0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    if (((a + b) & 1) == (x & y)) s += t.at(a, b, x, y);
    return s;
}

// Full 2d x 2d coefficient array of the CGLMP inequality I_d <= 0, with the
// marginal border terms contributing -P(a|0) and -P(b|0).
inline int cglmp_coefficient(int a, int b, int x, int y) {
    if (x == 0 && y == 0) return b >= a ? 1 : 0;
    if (x != y) return a >= b ? 1 : 0;
    return a >= b ? -1 : 0;  // x = y = 1
}

inline double cglmp_value(const CorrelationTable& t) {
    const int d = t.d();
    double s = 0.0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b)
                    s += cglmp_coefficient(a, b, x, y) * t.at(a, b, x, y);
    for (int a = 0; a < d; ++a) s -= t.marginal_a(a, 0);
    for (int b = 0; b < d; ++b) s -= t.marginal_b(b, 0);
    return s;
}

// Original-form evaluation over difference probabilities P(a-b=Delta|x,y),
// converted to the array normalization: I_d = (d-1)/(2d) * (I~_d - 2).
inline double cglmp_value_delta_form(const CorrelationTable& t) {
    const int d = t.d();
    auto pdelta = [&](int delta, int x, int y) {
        double s = 0.0;
        for (int a = 0; a < d; ++a) s += t.at(a, mod(a - delta, d), x, y);
        return s;
    };
    double tilde = 0.0;
    for (int k = 0; k < d / 2; ++k) {
        double coef = 1.0 - 2.0 * k / (d - 1);
        tilde += coef * ((pdelta(-k, 0, 0) + pdelta(k, 0, 1) + pdelta(k, 1, 0) +
                          pdelta(-k - 1, 1, 1)) -
                         (pdelta(k + 1, 0, 0) + pdelta(-k - 1, 0, 1) + pdelta(-k - 1, 1, 0) +
                          pdelta(k, 1, 1)));
    }
    return (d - 1) / (2.0 * d) * (tilde - 2.0);
}

// ---------------------------------------------------------------------------
// Deterministic strategies

struct DeterministicStrategy {
    int a0 = 0, a1 = 0, b0 = 0, b1 = 0;

    int a(int x) const { return x == 0 ? a0 : a1; }
    int b(int y) const { return y == 0 ? b0 : b1; }

    CorrelationTable to_table(int d) const {
        CorrelationTable t(d);
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) t.at(a(x), b(y), x, y) = 1.0;
        return t;
    }

    bool operator==(const DeterministicStrategy&) const = default;
};

// CGLMP value of a deterministic strategy, exact integer arithmetic:
// I_d = -2 + [b0>=a0] + [a0>=b1] + [a1>=b0] - [a1>=b1].
inline int deterministic_cglmp(const DeterministicStrategy& s, int d) {
    if (s.a0 < 0 || s.a0 >= d || s.a1 < 0 || s.a1 >= d || s.b0 < 0 || s.b0 >= d ||
        s.b1 < 0 || s.b1 >= d)
        throw std::out_of_range("deterministic_cglmp: outputs out of range");
    return -2 + (s.b0 >= s.a0) + (s.a0 >= s.b1) + (s.a1 >= s.b0) - (s.a1 >= s.b1);
}

enum class StrategyClass { L3, L2, Other };

inline const char* to_string(StrategyClass c) {
    switch (c) {
        case StrategyClass::L3: return "L3";
        case StrategyClass::L2: return "L2";
        default: return "Other";
    }
}

struct SaturatingStrategy {
    DeterministicStrategy strategy;
    StrategyClass cls = StrategyClass::Other;
    int relations = 0;  // how many of the four natural relations hold (mod d)
    bool in_l0 = false;  // a(0)=b(0)=b(1): Eve learns Bob's symbol for x=0
    bool in_l1 = false;  // a(1)=b(0)=b(1)-1: Eve learns Bob's symbol for x=1
};

// All deterministic strategies with I_d = 0 on the representative facet,
// found by exhaustive d^4 scan. Classes: L3 = three natural relations,
// L2 = in L0 or L1 with only two, Other = saturating but outside L.
inline std::vector<SaturatingStrategy> enumerate_saturating(int d) {
    if (d < 2) throw std::invalid_argument("enumerate_saturating: d must be >= 2");
    std::vector<SaturatingStrategy> out;
    for (int a0 = 0; a0 < d; ++a0)
        for (int a1 = 0; a1 < d; ++a1)
            for (int b0 = 0; b0 < d; ++b0)
                for (int b1 = 0; b1 < d; ++b1) {
                    DeterministicStrategy s{a0, a1, b0, b1};
                    if (deterministic_cglmp(s, d) != 0) continue;
                    SaturatingStrategy e;
                    e.strategy = s;
                    bool r00 = a0 == b0;
                    bool r01 = a0 == b1;
                    bool r10 = a1 == b0;
                    bool r11 = a1 == mod(b1 - 1, d);
                    e.relations = int(r00) + int(r01) + int(r10) + int(r11);
                    e.in_l0 = r00 && r01;
                    e.in_l1 = r10 && r11;
                    if (e.relations >= 3)
                        e.cls = StrategyClass::L3;
                    else if (e.in_l0 || e.in_l1)
                        e.cls = StrategyClass::L2;
                    else
                        e.cls = StrategyClass::Other;
                    out.push_back(e);
                }
    return out;
}

// ---------------------------------------------------------------------------
// The symmetric slice

// Point of the (d-1)-dimensional slice: P(a, a-Delta | x,y) = p_f / d with
// f = (-1)^{x+y} Delta + xy. All marginals equal 1/d.
struct SlicePoint {
    int d = 2;
    std::vector<double> pf;  // p_0 .. p_{d-1}, nonnegative, summing to 1

    CorrelationTable to_table() const {
        CorrelationTable t(d);
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                for (int a = 0; a < d; ++a)
                    for (int delta = 0; delta < d; ++delta) {
                        int sign = ((x + y) % 2 == 0) ? 1 : -1;
                        int f = mod(sign * delta + x * y, d);
                        t.at(a, mod(a - delta, d), x, y) = pf[f] / d;
                    }
        return t;
    }

    // Closed form p_NL = -2 + sum_Delta (1 - Delta/(d-1)) [3 p_{-Delta} - p_{Delta+1}],
    // equal to d/(d-1) <I_d, P> on the slice.
    double p_nl() const {
        double s = -2.0;
        for (int delta = 0; delta < d; ++delta)
            s += (1.0 - double(delta) / (d - 1)) *
                 (3.0 * pf[mod(-delta, d)] - pf[mod(delta + 1, d)]);
        return s;
    }

    // Alice-Bob error profile after pseudo-sifting: e(Delta) = (p_D + p_-D)/2.
    std::vector<double> error_profile() const {
        std::vector<double> e(d);
        for (int delta = 0; delta < d; ++delta)
            e[delta] = 0.5 * (pf[delta] + pf[mod(-delta, d)]);
        return e;
    }
};

// Extracts the p_f profile from the (x,y)=(0,0) block.
inline SlicePoint slice_profile(const CorrelationTable& t) {
    SlicePoint s;
    s.d = t.d();
    s.pf.assign(s.d, 0.0);
    for (int f = 0; f < s.d; ++f)
        for (int a = 0; a < s.d; ++a) s.pf[f] += t.at(a, mod(a - f, s.d), 0, 0);
    return s;
}

inline double slice_residual(const CorrelationTable& t) {
    SlicePoint s = slice_profile(t);
    CorrelationTable u = s.to_table();
    double r = 0.0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < t.d(); ++a)
                for (int b = 0; b < t.d(); ++b)
                    r = std::max(r, std::abs(t.at(a, b, x, y) - u.at(a, b, x, y)));
    return r;
}

inline bool on_slice(const CorrelationTable& t, double tol = kProbTol) {
    return slice_residual(t) <= tol;
}

// Two-step depolarization onto the slice: average over the d simultaneous
// output shifts, then over the four relabelling procedures. Exact linear
// map; preserves <I_d, P>.
inline SlicePoint depolarize(const CorrelationTable& t) {
    const int d = t.d();
    CorrelationTable p1(d);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) {
                    double s = 0.0;
                    for (int k = 0; k < d; ++k) s += t.at(mod(a + k, d), mod(b + k, d), x, y);
                    p1.at(a, b, x, y) = s / d;
                }
    auto P1 = [&](int a, int b, int x, int y) { return p1.at(mod(a, d), mod(b, d), x, y); };
    CorrelationTable p2(d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            p2.at(a, b, 0, 0) = 0.25 * (P1(a, b, 0, 0) + P1(-a, -b, 0, 1) +
                                        P1(-a, -b, 1, 0) + P1(a, b + 1, 1, 1));
            p2.at(a, b, 0, 1) = 0.25 * (P1(a, b, 0, 1) + P1(-a, -b + 1, 1, 1) +
                                        P1(-a, -b, 0, 0) + P1(a, b, 1, 0));
            p2.at(a, b, 1, 0) = 0.25 * (P1(a, b, 1, 0) + P1(-a - 1, -b, 1, 1) +
                                        P1(-a, -b, 0, 0) + P1(a + 1, b + 1, 0, 1));
            p2.at(a, b, 1, 1) = 0.25 * (P1(a, b, 1, 1) + P1(-a, -b + 1, 0, 1) +
                                        P1(-a - 1, -b, 1, 0) + P1(a + 1, b, 0, 0));
        }
    return slice_profile(p2);
}

// ---------------------------------------------------------------------------
// Named distributions

// PR_{2,d} = (1/d) delta(b - a = xy); for d=2 this is the PR-box.
inline CorrelationTable make_pr2d(int d) {
    CorrelationTable t(d);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < d; ++a) t.at(a, mod(a + x * y, d), x, y) = 1.0 / d;
    return t;
}

inline CorrelationTable make_pr_box() { return make_pr2d(2); }

// PR_{2,d'} embedded in d outcomes on the symbols {0..d'-1}: identity blocks
// for xy = 0 and the cyclic shift for x = y = 1.
inline CorrelationTable make_embedded_pr(int d, int dprime) {
    if (dprime < 2 || dprime > d)
        throw std::invalid_argument("make_embedded_pr: need 2 <= d' <= d");
    CorrelationTable t(d);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < dprime; ++a)
                t.at(a, x * y == 0 ? a : (a + 1) % dprime, x, y) = 1.0 / dprime;
    return t;
}

// Isotropic d=2 family: (1+p_NL)/4 delta(a+b=xy) + p_L/8.
inline CorrelationTable make_isotropic(double p_nl) {
    if (p_nl < 0.0 || p_nl > 1.0)
        throw std::invalid_argument("make_isotropic: p_nl must lie in [0,1]");
    CorrelationTable t(2);
    double pl = 1.0 - p_nl;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    t.at(a, b, x, y) =
                        pl / 8.0 + (((a + b) & 1) == (x & y) ? (1.0 + p_nl) / 4.0 : 0.0);
    return t;
}

// Noiseless BB84 correlations: perfect correlation in matching bases, none
// otherwise. The inputs are labelled so that the table sits on the
// representative CHSH facet (CHSH = 3); it is local all the same.
inline CorrelationTable make_bb84() {
    CorrelationTable t(2);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    t.at(a, b, x, y) = (x != y) ? (a == b ? 0.5 : 0.0) : 0.25;
    return t;
}

// Equiprobable mixture of the three two-outcome PR-like points above the
// d=3 CGLMP facet. Marginals are uniform but the point is not on the slice.
inline CorrelationTable make_m_pr() {
    CorrelationTable t(3);
    const std::array<std::array<int, 2>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
    for (const auto& pr : pairs)
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                for (int i = 0; i < 2; ++i) {
                    int a = pr[i];
                    int b = (x * y == 0) ? a : pr[1 - i];
                    t.at(a, b, x, y) += 1.0 / 3.0 * 0.5;
                }
    return t;
}

// Equiprobable mixture of the four alternative PR_{2,3}-like boxes with
// b-a equal to -xy, x(2-y), y(2-x), (x+y+1) mod 2. Lies on the slice at
// p_0 = 3/4, p_1 = 0.
inline CorrelationTable make_alt_pr23_mixture() {
    CorrelationTable t(3);
    auto add_box = [&](auto shift) {
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                for (int a = 0; a < 3; ++a)
                    t.at(a, mod(a + shift(x, y), 3), x, y) += 0.25 / 3.0;
    };
    add_box([](int x, int y) { return -x * y; });
    add_box([](int x, int y) { return x * (2 - y); });
    add_box([](int x, int y) { return y * (2 - x); });
    add_box([](int x, int y) { return (x + y + 1) % 2; });
    return t;
}

// ---------------------------------------------------------------------------
// Eve's extremal decompositions

struct WeightedStrategy {
    DeterministicStrategy strategy;
    double weight = 0.0;
};

struct EveDecomposition {
    int d = 2;
    double p_nl = 0.0;  // weight on PR_{2,d}
    std::vector<WeightedStrategy> locals;

    double p_l() const {
        double s = 0.0;
        for (const auto& w : locals) s += w.weight;
        return s;
    }

    CorrelationTable recombine() const {
        CorrelationTable t(d);
        CorrelationTable pr = make_pr2d(d);
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                for (int a = 0; a < d; ++a)
                    for (int b = 0; b < d; ++b) t.at(a, b, x, y) = p_nl * pr.at(a, b, x, y);
        for (const auto& w : locals)
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y)
                    t.at(w.strategy.a(x), w.strategy.b(y), x, y) += w.weight;
        return t;
    }
};

// The eight deterministic strategies on the representative CHSH facet,
// ordered L_1^0, L_1^1, L_2^0, ..., L_4^1.
inline std::vector<DeterministicStrategy> chsh_facet_strategies() {
    std::vector<DeterministicStrategy> v;
    for (int j = 1; j <= 4; ++j)
        for (int r = 0; r < 2; ++r) {
            DeterministicStrategy s;
            switch (j) {
                case 1: s = {r, r, r, r}; break;
                case 2: s = {r, 1 - r, r, r}; break;
                case 3: s = {r, r, r, 1 - r}; break;
                default: s = {r, 1 - r, 1 - r, r}; break;  // a=x+r, b=y+r+1
            }
            v.push_back(s);
        }
    return v;
}

class DecompositionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

namespace detail {

// Least-squares solve of the (overdetermined, consistent) extremal-mixture
// system via normal equations; the 9 columns are linearly independent.
inline std::vector<double> solve_mixture(const std::vector<std::vector<double>>& cols,
                                         const std::vector<double>& rhs) {
    const std::size_t n = cols.size();
    const std::size_t m = rhs.size();
    std::vector<std::vector<double>> A(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < m; ++k) A[i][j] += cols[i][k] * cols[j][k];
        for (std::size_t k = 0; k < m; ++k) A[i][n] += cols[i][k] * rhs[k];
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        std::swap(A[c], A[piv]);
        if (std::abs(A[c][c]) < 1e-14)
            throw DecompositionError("solve_mixture: singular system");
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            double f = A[r][c] / A[c][c];
            for (std::size_t k = c; k <= n; ++k) A[r][k] -= f * A[c][k];
        }
    }
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = A[i][n] / A[i][i];
    return w;
}

}  // namespace detail

// Unique decomposition of a d=2 table in the sector above the representative
// CHSH facet onto the PR-box and the eight facet strategies. Weights solve
// the square, well-conditioned linear system; membership is decided by their
// nonnegativity (tolerance 1e-10).
inline EveDecomposition decompose(const CorrelationTable& t) {
    if (t.d() != 2) throw std::domain_error("decompose: table route requires d = 2");
    auto strategies = chsh_facet_strategies();
    std::vector<std::vector<double>> cols;
    auto flatten = [](const CorrelationTable& u) {
        std::vector<double> v;
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) v.push_back(u.at(a, b, x, y));
        return v;
    };
    cols.push_back(flatten(make_pr_box()));
    for (const auto& s : strategies) cols.push_back(flatten(s.to_table(2)));
    auto rhs = flatten(t);
    auto w = detail::solve_mixture(cols, rhs);

    double resid = 0.0;
    for (std::size_t k = 0; k < rhs.size(); ++k) {
        double v = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) v += w[i] * cols[i][k];
        resid = std::max(resid, std::abs(v - rhs[k]));
    }
    if (resid > 1e-10)
        throw DecompositionError("decompose: table is not a mixture of the facet points");
    for (double v : w)
        if (v < -1e-10)
            throw DecompositionError("decompose: point lies outside the facet sector");

    EveDecomposition dec;
    dec.d = 2;
    dec.p_nl = std::max(0.0, w[0]);
    for (std::size_t i = 0; i < strategies.size(); ++i)
        dec.locals.push_back({strategies[i], std::max(0.0, w[i + 1])});
    return dec;
}

// Explicit d=3 facet strategies of the three families (r = 0,1,2).
inline DeterministicStrategy d3_strategy(const std::string& family, int r) {
    auto m = [&](int v) { return mod(v, 3); };
    if (family == "L31") return {m(r), m(r), m(r), m(r)};
    if (family == "L32") return {m(r), m(r - 1), m(r), m(r)};
    if (family == "L33") return {m(r), m(r), m(r), m(r + 1)};
    if (family == "L34") return {m(r), m(r - 1), m(r - 1), m(r)};
    if (family == "L21") return {m(r), m(r + 1), m(r), m(r)};
    if (family == "L22") return {m(r), m(r + 1), m(r + 1), m(r + 2)};
    if (family == "Le1") return {m(r), m(r), m(r), m(r - 1)};
    if (family == "Le2") return {m(r), m(r + 1), m(r), m(r - 1)};
    if (family == "Le3") return {m(r), m(r + 1), m(r + 1), m(r)};
    if (family == "Le4") return {m(r), m(r - 1), m(r + 1), m(r)};
    throw std::invalid_argument("d3_strategy: unknown family " + family);
}

// Free parameters of the general decomposition of M_2: p_2^r (weight of the
// L_{2,1}^r = L_{2,2}^r pair) and p_{e,1}^r. The information-optimal choice
// is p_2^r = 1/6, all p_{e,1}^r = 0.
struct M2Parameters {
    std::array<double, 3> p2{1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
    std::array<double, 3> pe1{0.0, 0.0, 0.0};
};

// Decomposition of a d=3 slice point in the triangle above the CGLMP facet:
// p_NL on PR_{2,3}, weight 4 p_1 on M_3 (unique, 1/12 on each L^3 point) and
// weight 2 p_2 on M_2 (per the chosen family parameters).
inline EveDecomposition decompose_d3(const SlicePoint& sp, const M2Parameters& params = {}) {
    if (sp.d != 3) throw std::domain_error("decompose_d3: requires d = 3");
    const double p0 = sp.pf[0], p1 = sp.pf[1], p2 = sp.pf[2];
    const double p_nl = 2.0 * (p0 - p1) - 1.0;
    const double w3 = 4.0 * p1;
    const double w2 = 2.0 * p2;
    if (p_nl < -1e-10 || w3 < -1e-10 || w2 < -1e-10)
        throw DecompositionError("decompose_d3: point outside the facet sector");

    EveDecomposition dec;
    dec.d = 3;
    dec.p_nl = std::max(0.0, p_nl);
    auto push = [&](const std::string& fam, int r, double w) {
        if (w < -1e-10) throw DecompositionError("decompose_d3: infeasible M2 parameters");
        dec.locals.push_back({d3_strategy(fam, r), std::max(0.0, w)});
    };
    for (int r = 0; r < 3; ++r)
        for (const char* fam : {"L31", "L32", "L33", "L34"}) push(fam, r, w3 / 12.0);
    for (int r = 0; r < 3; ++r) {
        double q2 = params.p2[r];
        double qe1 = params.pe1[r];
        double qe1n = params.pe1[(r + 1) % 3];
        push("L21", r, w2 * q2);
        push("L22", r, w2 * q2);
        push("Le1", r, w2 * qe1);
        push("Le2", r, w2 * (1.0 / 6.0 - q2 - qe1));
        push("Le3", r, w2 * (1.0 / 6.0 - q2 - qe1n));
        push("Le4", r, w2 * qe1n);
    }
    return dec;
}

inline EveDecomposition decompose(const SlicePoint& sp) {
    if (sp.d == 2) return decompose(sp.to_table());
    if (sp.d == 3) return decompose_d3(sp);
    throw std::domain_error("decompose: slice decomposition implemented for d in {2,3}");
}

// ---------------------------------------------------------------------------
// Pseudorandom test inputs: mixtures of random deterministic strategies and
// random PR-type points, so that every generated table is valid by
// construction.

inline CorrelationTable random_table(int d, std::mt19937_64& rng, int n_local = 6,
                                     int n_pr = 2) {
    std::uniform_int_distribution<int> out(0, d - 1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<CorrelationTable> parts;
    for (int i = 0; i < n_local; ++i) {
        DeterministicStrategy s{out(rng), out(rng), out(rng), out(rng)};
        parts.push_back(s.to_table(d));
    }
    for (int i = 0; i < n_pr; ++i) {
        // PR-type point with a random shift pattern s(x,y), nonlocal in general
        std::array<int, 4> shift{out(rng), out(rng), out(rng), out(rng)};
        CorrelationTable t(d);
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                for (int a = 0; a < d; ++a)
                    t.at(a, mod(a + shift[2 * x + y], d), x, y) = 1.0 / d;
        parts.push_back(t);
    }
    std::vector<double> w(parts.size());
    double tot = 0.0;
    for (auto& v : w) {
        v = -std::log(1.0 - u(rng));
        tot += v;
    }
    CorrelationTable t(d);
    for (std::size_t i = 0; i < parts.size(); ++i)
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                for (int a = 0; a < d; ++a)
                    for (int b = 0; b < d; ++b)
                        t.at(a, b, x, y) += w[i] / tot * parts[i].at(a, b, x, y);
    return t;
}

inline SlicePoint random_slice_point(int d, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SlicePoint s;
    s.d = d;
    s.pf.resize(d);
    double tot = 0.0;
    for (auto& v : s.pf) {
        v = -std::log(1.0 - u(rng));
        tot += v;
    }
    for (auto& v : s.pf) v /= tot;
    return s;
}

// ---------------------------------------------------------------------------
// Distribution file format: header "d=<int>", then a 2d x 2d matrix, rows
// indexed by (x,a), columns by (y,b). Exact decimal parsing, no locale.

inline void write_table(std::ostream& os, const CorrelationTable& t) {
    const int d = t.d();
    os << "d=" << d << "\n";
    char buf[64];
    for (int x = 0; x < 2; ++x)
        for (int a = 0; a < d; ++a) {
            for (int y = 0; y < 2; ++y)
                for (int b = 0; b < d; ++b) {
                    std::snprintf(buf, sizeof buf, "%.17g", t.at(a, b, x, y));
                    os << (y == 0 && b == 0 ? "" : " ") << buf;
                }
            os << "\n";
        }
}

inline CorrelationTable read_table(std::istream& is) {
    std::string header;
    if (!std::getline(is, header) || header.rfind("d=", 0) != 0)
        throw std::runtime_error("read_table: expected header 'd=<int>'");
    int d = std::stoi(header.substr(2));
    CorrelationTable t(d);
    for (int x = 0; x < 2; ++x)
        for (int a = 0; a < d; ++a)
            for (int y = 0; y < 2; ++y)
                for (int b = 0; b < d; ++b) {
                    double v;
                    if (!(is >> v)) throw std::runtime_error("read_table: truncated matrix");
                    t.at(a, b, x, y) = v;
                }
    return t;
}

}  // namespace nosig
