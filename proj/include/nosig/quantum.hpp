#pragma once

// Quantum side: correlation points reachable by measuring Schmidt-diagonal
// states with the standard phase settings, and the one-way quantum key rates
// against the Bell-diagonal eavesdropping family (Devetak-Winter bound,
// Holevo quantity, BB84 equivalence).

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "correlations.hpp"
#include "keyrate.hpp"
#include "optimize.hpp"

namespace nosig {

// Entanglement parameter minimizing the Kullback-Leibler distance to local
// correlations for two qutrits (cited value, not rederived here).
inline constexpr double kGammaKL = 0.6529;

struct SchmidtState {
    int d = 2;
    std::vector<double> c;

    SchmidtState(int d_, std::vector<double> c_) : d(d_), c(std::move(c_)) {
        if (int(c.size()) != d) throw std::invalid_argument("SchmidtState: size mismatch");
        double n = 0.0;
        for (double v : c) {
            if (v < 0.0) throw std::invalid_argument("SchmidtState: coefficients must be >= 0");
            n += v * v;
        }
        if (std::abs(n - 1.0) > 1e-12)
            throw std::invalid_argument("SchmidtState: not normalized");
    }

    static SchmidtState maximally_entangled(int d) {
        return SchmidtState(d, std::vector<double>(d, 1.0 / std::sqrt(double(d))));
    }

    // (|00> + gamma|11> + |22>)/sqrt(2+gamma^2)
    static SchmidtState gamma_state(double gamma) {
        double n = std::sqrt(2.0 + gamma * gamma);
        return SchmidtState(3, {1.0 / n, gamma / n, 1.0 / n});
    }

    // overlap with the maximally entangled state of the same dimension
    double eta() const {
        double s = 0.0;
        for (double v : c) s += v;
        return s / std::sqrt(double(d));
    }
};

struct PhaseSettings {
    double phi0, phi1, th0, th1;
};

inline PhaseSettings default_settings(int d) {
    const double pi = std::numbers::pi;
    return {0.0, pi / d, -pi / (2.0 * d), pi / (2.0 * d)};
}

// P(a,b|x,y) = (1/d^2) sum_{k,k'} c_k c_k' cos[(2 pi (a-b)/d + phi_x + th_y)(k-k')].
// With the default settings the result lies on the symmetric slice.
inline CorrelationTable qudit_distribution(const SchmidtState& s,
                                           const PhaseSettings& set) {
    const int d = s.d;
    const double pi = std::numbers::pi;
    CorrelationTable t(d);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            double phase = (x == 0 ? set.phi0 : set.phi1) + (y == 0 ? set.th0 : set.th1);
            for (int delta = 0; delta < d; ++delta) {
                double ang = 2.0 * pi * delta / d + phase;
                double p = 0.0;
                for (int k = 0; k < d; ++k)
                    for (int kp = 0; kp < d; ++kp)
                        p += s.c[k] * s.c[kp] * std::cos(ang * (k - kp));
                p /= double(d) * d;
                for (int a = 0; a < d; ++a) t.at(a, mod(a - delta, d), x, y) = p;
            }
        }
    return t;
}

inline CorrelationTable qudit_distribution(const SchmidtState& s) {
    return qudit_distribution(s, default_settings(s.d));
}

// Slice profile straight from the (x,y)=(0,0) block of the same formula.
inline SlicePoint qudit_slice(const SchmidtState& s) {
    const int d = s.d;
    const double pi = std::numbers::pi;
    PhaseSettings set = default_settings(d);
    SlicePoint sp;
    sp.d = d;
    sp.pf.resize(d);
    for (int f = 0; f < d; ++f) {
        double ang = 2.0 * pi * f / d + set.phi0 + set.th0;
        double p = 0.0;
        for (int k = 0; k < d; ++k)
            for (int kp = 0; kp < d; ++kp)
                p += s.c[k] * s.c[kp] * std::cos(ang * (k - kp));
        sp.pf[f] = p / d;
    }
    return sp;
}

// Closed forms for the d=3 gamma family.
inline SlicePoint probsgamma(double gamma) {
    double den = 2.0 + gamma * gamma;
    double s3 = std::sqrt(3.0);
    SlicePoint sp;
    sp.d = 3;
    sp.pf = {(1.0 + (1.0 + 2.0 * s3 * gamma) / den) / 3.0,
             (1.0 - 2.0 / den) / 3.0,
             (1.0 + (1.0 - 2.0 * s3 * gamma) / den) / 3.0};
    return sp;
}

// ---------------------------------------------------------------------------
// Bell-diagonal attack (two qubits)

struct BellDiagonalAttack {
    double l1, l2, l4;  // weights of phi+, each of phi-/psi+, psi-
    double disturbance;

    double qber_chsh() const {
        return (1.0 - (l1 - l4) / std::sqrt(2.0)) / 2.0;
    }
    double qber_bb84() const { return disturbance; }
};

inline double q0_chsh() {
    double s = std::sin(std::numbers::pi / 8.0);
    return s * s;  // = (1 - 1/sqrt2)/2
}

// p_NL = sqrt(2)(1-2D) - 1: nonlocal weight of the quantum point produced by
// the CHSH settings at disturbance D.
inline double p_nl_from_disturbance(double D) {
    return std::sqrt(2.0) * (1.0 - 2.0 * D) - 1.0;
}

inline double disturbance_from_p_nl(double p_nl) {
    return 0.5 * (1.0 - (1.0 + p_nl) / std::sqrt(2.0));
}

inline BellDiagonalAttack channel_from_disturbance(double D) {
    if (D < 0.0 || D > 0.5)
        throw std::domain_error("channel_from_disturbance: D outside [0,1/2]");
    return {(1.0 - D) * (1.0 - D), D * (1.0 - D), D * D, D};
}

// ---------------------------------------------------------------------------
// Small symmetric eigenproblems (cyclic Jacobi)

using Mat = std::vector<std::vector<double>>;

inline std::vector<double> jacobi_eigenvalues(Mat a, double tol = 1e-12) {
    const std::size_t n = a.size();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off < tol * tol) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                double theta = 0.5 * std::atan2(2.0 * a[p][q], a[q][q] - a[p][p]);
                double c = std::cos(theta), s = std::sin(theta);
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = a[i][i];
    return w;
}

inline double von_neumann_entropy(const Mat& rho) {
    double h = 0.0;
    for (double w : jacobi_eigenvalues(rho))
        if (w > 1e-14) h -= w * std::log2(w);
    return h;
}

// ---------------------------------------------------------------------------
// Eve's conditional states and the Devetak-Winter rate

enum class Side { Alice, Bob };

namespace detail {

// Bell basis as real vectors in the product basis (00,01,10,11)
inline const std::array<std::array<double, 4>, 4>& bell_basis() {
    static const double r = 1.0 / std::sqrt(2.0);
    static const std::array<std::array<double, 4>, 4> b{{
        {r, 0, 0, r},    // phi+
        {r, 0, 0, -r},   // phi-
        {0, r, r, 0},    // psi+
        {0, r, -r, 0},   // psi-
    }};
    return b;
}

inline std::array<double, 2> qubit_ket(double theta, int i) {
    double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    return i == 0 ? std::array<double, 2>{c, s} : std::array<double, 2>{-s, c};
}

// rho_E[m][n] = sqrt(l_m l_n) <B_m|Pi_i|B_n>, the projector acting on one
// side and summed over the listed measurement directions, unnormalized.
inline Mat eve_conditional(const BellDiagonalAttack& at, Side side,
                           const std::vector<double>& bases, int outcome) {
    const auto& B = bell_basis();
    std::array<double, 4> lam{at.l1, at.l2, at.l2, at.l4};
    Mat m(4, std::vector<double>(4, 0.0));
    for (double th : bases) {
        auto k = qubit_ket(th, outcome);
        double proj[4][4] = {};
        // P1 (x) I or I (x) P1 in the product basis
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int r = 0; r < 2; ++r) {
                    double v = k[i] * k[j];
                    if (side == Side::Alice)
                        proj[i * 2 + r][j * 2 + r] += v;
                    else
                        proj[r * 2 + i][r * 2 + j] += v;
                }
        for (int mm = 0; mm < 4; ++mm)
            for (int nn = 0; nn < 4; ++nn) {
                double ip = 0.0;
                for (int i = 0; i < 4; ++i)
                    for (int j = 0; j < 4; ++j) ip += B[mm][i] * proj[i][j] * B[nn][j];
                m[mm][nn] += std::sqrt(lam[mm] * lam[nn]) * ip;
            }
    }
    return m;
}

inline Mat normalized(Mat m) {
    double tr = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) tr += m[i][i];
    for (auto& row : m)
        for (auto& v : row) v /= tr;
    return m;
}

inline Mat mix(const Mat& a, const Mat& b, double q) {
    Mat out = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            out[i][j] = (1.0 - q) * a[i][j] + q * b[i][j];
    return out;
}

inline double holevo(const BellDiagonalAttack& at, Side side,
                     const std::vector<double>& bases, double q) {
    Mat rho_e(4, std::vector<double>(4, 0.0));
    rho_e[0][0] = at.l1;
    rho_e[1][1] = at.l2;
    rho_e[2][2] = at.l2;
    rho_e[3][3] = at.l4;
    Mat r0 = normalized(eve_conditional(at, side, bases, 0));
    Mat r1 = normalized(eve_conditional(at, side, bases, 1));
    Mat s0 = mix(r0, r1, q);
    Mat s1 = mix(r1, r0, q);
    return von_neumann_entropy(rho_e) -
           0.5 * (von_neumann_entropy(s0) + von_neumann_entropy(s1));
}

}  // namespace detail

// DW rate for the CHSH-settings protocol under the Bell-diagonal attack,
// with a classical flip (probability q) applied to the chosen side's bit.
inline double dw_rate_chsh(double D, double q, Side side = Side::Bob) {
    const double pi = std::numbers::pi;
    auto at = channel_from_disturbance(D);
    double Q = at.qber_chsh();
    double Qp = (1.0 - q) * Q + q * (1.0 - Q);
    std::vector<double> bases = side == Side::Bob ? std::vector<double>{pi / 4, 3 * pi / 4}
                                                  : std::vector<double>{pi / 2, 0.0};
    return 1.0 - binary_h(Qp) - detail::holevo(at, side, bases, q);
}

// BB84 under the same attack family: per-basis Holevo averaged over the two
// key bases. Q_B = D parametrizes the curve.
inline double bb84_rate(double Q_B, double q, Side side = Side::Bob) {
    const double pi = std::numbers::pi;
    auto at = channel_from_disturbance(Q_B);
    double Qp = (1.0 - q) * Q_B + q * (1.0 - Q_B);
    double chi = 0.5 * (detail::holevo(at, side, {0.0}, q) +
                        detail::holevo(at, side, {pi / 2}, q));
    return 1.0 - binary_h(Qp) - chi;
}

template <class RateFn>
double optimized_rate(RateFn&& f, double* q_opt = nullptr) {
    // stop short of q = 1/2, where every rate degenerates to exactly zero
    auto r = opt::grid_golden_max(f, 0.0, 0.499, 100, 1e-6);
    if (q_opt) *q_opt = r.x;
    return r.value;
}

// Disturbance where the (optionally q-optimized) rate crosses zero.
template <class RateFn>
double critical_disturbance(RateFn&& f, bool optimize_q, double tol = 1e-6) {
    auto g = [&](double D) {
        if (!optimize_q) return f(D, 0.0);
        return optimized_rate([&](double q) { return f(D, q); });
    };
    return opt::bisect(g, 1e-6, 0.3, tol);
}

struct EquivalenceReport {
    double rate_chsh;
    double rate_bb84;
    double diff;
};

// With q_B = Q0 + q_C/sqrt(2) and Q_B = sqrt(2)(Q_C - Q0), the two protocols
// give the same DW rate.
inline EquivalenceReport equivalence_check(double D, double q_C, Side side = Side::Bob) {
    double qb = q0_chsh() + q_C / std::sqrt(2.0);
    EquivalenceReport r;
    r.rate_chsh = dw_rate_chsh(D, q_C, side);
    r.rate_bb84 = bb84_rate(D, qb, side);
    r.diff = r.rate_chsh - r.rate_bb84;
    return r;
}

// Disturbance where BB84's optimal flip probability reaches Q0; beyond it
// the CHSH-settings protocol needs no pre-processing advantage of its own.
inline double crossover_disturbance(Side side = Side::Bob, double tol = 1e-5) {
    auto qopt = [&](double D) {
        double q = 0.0;
        optimized_rate([&](double qq) { return bb84_rate(D, qq, side); }, &q);
        return q - q0_chsh();
    };
    return opt::bisect(qopt, 0.05, 0.14, tol);
}

// ---------------------------------------------------------------------------
// Schmidt-coefficient optimization of the generic-d one-way bound

struct SchmidtOptimum {
    SchmidtState state;
    SlicePoint slice;
    double rate_dits;
    double rate_bits;
    double eta;
};

// Maximize the one-way slice rate over Schmidt states with the default
// settings. By default the search runs in the symmetric subspace
// c_k = c_{d-1-k}; the full space is available as a cross-check.
inline SchmidtOptimum schmidt_optimize_oneway(int d, bool symmetric = true) {
    const int m = symmetric ? (d + 1) / 2 : d;
    auto build = [&](const std::vector<double>& x) {
        std::vector<double> c(d);
        for (int k = 0; k < d; ++k) {
            int i = symmetric ? std::min(k, d - 1 - k) : k;
            c[k] = std::abs(x[i]);
        }
        double n = 0.0;
        for (double v : c) n += v * v;
        n = std::sqrt(n);
        for (double& v : c) v /= n;
        return SchmidtState(d, c);
    };
    auto objective = [&](const std::vector<double>& x) {
        return -generic_d_oneway(qudit_slice(build(x))).bits;
    };
    std::vector<double> x0(m, 1.0 / std::sqrt(double(d)));
    auto best = opt::nelder_mead_min(objective, x0, 0.05, 5000);
    // second start: slightly depressed middle coefficients, the shape the
    // d=3 optimum takes
    std::vector<double> x1 = x0;
    for (int i = 0; i < m; ++i) x1[i] *= 1.0 - 0.05 * i / std::max(1, m - 1);
    auto alt = opt::nelder_mead_min(objective, x1, 0.05, 5000);
    if (alt.value < best.value) best = alt;

    SchmidtOptimum out{build(best.x), qudit_slice(build(best.x)), 0.0, -best.value, 0.0};
    out.rate_dits = out.rate_bits / std::log2(double(d));
    out.eta = out.state.eta();
    return out;
}

}  // namespace nosig
