#pragma once

#include <algorithm>
#include <cmath>

// Central finite differences used as the independent oracle for every
// derivative check. Step sizes follow the usual optimum-per-order choice:
// large enough to beat roundoff, small enough to keep truncation in budget.
namespace oracle {

inline constexpr double kStep1 = 1e-6;
inline constexpr double kStep2 = 1e-3;
inline constexpr double kStep3 = 1e-2;

inline constexpr double kTol1 = 1e-6;
inline constexpr double kTol2 = 1e-5;
inline constexpr double kTol3 = 1e-3;

template <class F>
double fd1(F&& f, double x, double h = kStep1) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Fourth-order-accurate central stencils for the higher orders: at the steps
// above, the classical 3/5-point forms carry h^2 f^(4|5) truncation that can
// exceed the tolerances on tanh compositions, so the oracle needs the extra
// order, not the implementation.
template <class F>
double fd2(F&& f, double x, double h = kStep2) {
    return (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) -
            f(x - 2.0 * h)) /
           (12.0 * h * h);
}

template <class F>
double fd3(F&& f, double x, double h = kStep3) {
    return (f(x - 3.0 * h) / 8.0 - f(x - 2.0 * h) + 13.0 * f(x - h) / 8.0 -
            13.0 * f(x + h) / 8.0 + f(x + 2.0 * h) - f(x + 3.0 * h) / 8.0) /
           (h * h * h);
}

// Relative comparison with an absolute floor of 1, the standard gradcheck
// metric: |a - b| <= tol * max(1, |a|, |b|).
inline bool close_rel(double a, double b, double tol) {
    if (!std::isfinite(a) || !std::isfinite(b)) return false;
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace oracle
