#pragma once

// Small scalar and simplex optimizers used throughout the library.
// Objectives here are cheap closed forms, so grid seeding plus golden
// section is enough; no external solver is needed.

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace nosig::opt {

struct ScalarResult {
    double x = 0.0;
    double value = 0.0;
};

// Golden-section maximization on [lo, hi]; assumes unimodality on the
// bracket (callers seed with a grid first).
template <class F>
ScalarResult golden_max(F&& f, double lo, double hi, double xtol) {
    static const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xtol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    double xm = 0.5 * (a + b);
    return {xm, f(xm)};
}

// Grid seed (n+1 points) followed by golden-section refinement around the
// best grid cell. Guards against flat or multi-modal objectives.
template <class F>
ScalarResult grid_golden_max(F&& f, double lo, double hi, int n, double xtol) {
    if (n < 2) throw std::invalid_argument("grid_golden_max: need n >= 2");
    double best_x = lo, best_v = f(lo);
    for (int i = 1; i <= n; ++i) {
        double x = lo + (hi - lo) * i / n;
        double v = f(x);
        if (v > best_v) {
            best_v = v;
            best_x = x;
        }
    }
    double step = (hi - lo) / n;
    double a = std::max(lo, best_x - step);
    double b = std::min(hi, best_x + step);
    auto r = golden_max(f, a, b, xtol);
    if (r.value < best_v) return {best_x, best_v};
    return r;
}

// Bisection for the root of a monotone function with f(lo) and f(hi) of
// opposite sign.
template <class F>
double bisect(F&& f, double lo, double hi, double xtol) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw std::domain_error("bisect: no sign change on bracket");
    while (hi - lo > xtol) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
};

// Nelder-Mead minimization, standard coefficients. Enough for the
// handful-of-parameters searches done here (Schmidt coefficients).
inline SimplexResult nelder_mead_min(const std::function<double(const std::vector<double>&)>& f,
                                     std::vector<double> x0, double step, int max_iter,
                                     double ftol = 1e-13) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> pts(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step;
    std::vector<double> vals(n + 1);
    for (std::size_t i = 0; i <= n; ++i) vals[i] = f(pts[i]);

    auto order = [&] {
        for (std::size_t i = 0; i <= n; ++i)
            for (std::size_t j = i + 1; j <= n; ++j)
                if (vals[j] < vals[i]) {
                    std::swap(vals[i], vals[j]);
                    std::swap(pts[i], pts[j]);
                }
    };
    order();

    for (int it = 0; it < max_iter; ++it) {
        if (vals[n] - vals[0] < ftol) break;
        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[i][k] / double(n);

        auto mix = [&](double coef) {
            std::vector<double> p(n);
            for (std::size_t k = 0; k < n; ++k)
                p[k] = centroid[k] + coef * (pts[n][k] - centroid[k]);
            return p;
        };

        auto refl = mix(-1.0);
        double fr = f(refl);
        if (fr < vals[0]) {
            auto exp_ = mix(-2.0);
            double fe = f(exp_);
            if (fe < fr) {
                pts[n] = exp_;
                vals[n] = fe;
            } else {
                pts[n] = refl;
                vals[n] = fr;
            }
        } else if (fr < vals[n - 1]) {
            pts[n] = refl;
            vals[n] = fr;
        } else {
            auto con = mix(fr < vals[n] ? -0.5 : 0.5);
            double fc = f(con);
            if (fc < std::min(fr, vals[n])) {
                pts[n] = con;
                vals[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t k = 0; k < n; ++k)
                        pts[i][k] = pts[0][k] + 0.5 * (pts[i][k] - pts[0][k]);
                    vals[i] = f(pts[i]);
                }
            }
        }
        order();
    }
    return {pts[0], vals[0]};
}

}  // namespace nosig::opt
