#pragma once

// Brute-force reference computations used by the verification suite and
// the tests: numerical quadrature, grid minimization and finite
// differences. Everything here is independent of the closed-form paths it
// is used to check.

#include <cmath>
#include <functional>

#include "anseroid/geometry.hpp"

namespace anseroid::oracle {

namespace detail {
inline double simpson(const std::function<double(double)>& f, double a, double fa, double b,
                      double fb, double m, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_impl(const std::function<double(double)>& f, double a, double fa,
                                    double b, double fb, double m, double fm, double whole,
                                    double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(f, a, fa, m, fm, lm, flm);
    const double right = simpson(f, m, fm, b, fb, rm, frm);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_impl(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_impl(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12, int max_depth = 40) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = detail::simpson(f, a, fa, b, fb, m, fm);
    return detail::adaptive_simpson_impl(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

// Argmin of a scalar function over a uniform grid.
inline double grid_argmin(const std::function<double(double)>& f, double lo, double hi,
                          double resolution) {
    double best_x = lo;
    double best_f = f(lo);
    const long n = static_cast<long>(std::ceil((hi - lo) / resolution));
    for (long i = 1; i <= n; ++i) {
        const double x = lo + i * (hi - lo) / n;
        const double fx = f(x);
        if (fx < best_f) {
            best_f = fx;
            best_x = x;
        }
    }
    return best_x;
}

inline Vec2 central_gradient(const std::function<double(const Vec2&)>& f, const Vec2& p,
                             double h = 1e-5) {
    return {(f({p.x + h, p.y}) - f({p.x - h, p.y})) / (2.0 * h),
            (f({p.x, p.y + h}) - f({p.x, p.y - h})) / (2.0 * h)};
}

}  // namespace anseroid::oracle
