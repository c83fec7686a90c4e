#pragma once

#include <cmath>

namespace gradsense {

/// Value of a scalar expression together with its first three derivatives
/// with respect to a single seed variable. Derivatives are stored raw,
/// without the 1/k! Taylor normalization, so d1/d2/d3 are directly the
/// quantities a trace records.
struct Jet3 {
    double v = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;

    friend constexpr bool operator==(const Jet3&, const Jet3&) = default;
};

/// The differentiation variable itself: x with dx/dx = 1.
constexpr Jet3 seed(double x0) { return {x0, 1.0, 0.0, 0.0}; }

/// A quantity that does not depend on the seed variable.
constexpr Jet3 constant(double c) { return {c, 0.0, 0.0, 0.0}; }

constexpr Jet3 operator-(const Jet3& a) { return {-a.v, -a.d1, -a.d2, -a.d3}; }

constexpr Jet3 operator+(const Jet3& a, const Jet3& b) {
    return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3};
}

constexpr Jet3 operator-(const Jet3& a, const Jet3& b) { return a + (-b); }

/// Multiply every component by a scalar.
constexpr Jet3 scale(const Jet3& a, double s) {
    return {a.v * s, a.d1 * s, a.d2 * s, a.d3 * s};
}

constexpr Jet3 operator*(const Jet3& a, double s) { return scale(a, s); }
constexpr Jet3 operator*(double s, const Jet3& a) { return scale(a, s); }

/// Leibniz rule to third order. Terms are grouped so that swapping a and b
/// only commutes operands of IEEE + and *, which keeps a*b == b*a
/// bit-for-bit.
constexpr Jet3 operator*(const Jet3& a, const Jet3& b) {
    return {
        a.v * b.v,
        a.d1 * b.v + a.v * b.d1,
        2.0 * (a.d1 * b.d1) + (a.d2 * b.v + a.v * b.d2),
        3.0 * (a.d2 * b.d1 + a.d1 * b.d2) + (a.d3 * b.v + a.v * b.d3),
    };
}

constexpr Jet3 square(const Jet3& a) { return a * a; }

/// tanh through the chain rule (Faa di Bruno) to third order.
/// With t = tanh(u): tanh' = 1 - t^2, tanh'' = -2 t (1 - t^2),
/// tanh''' = -2 (1 - t^2)(1 - 3 t^2).
inline Jet3 tanh(const Jet3& a) {
    const double t = std::tanh(a.v);
    const double g1 = 1.0 - t * t;
    const double g2 = -2.0 * t * g1;
    const double g3 = -2.0 * g1 * (1.0 - 3.0 * t * t);
    return {
        t,
        g1 * a.d1,
        g2 * (a.d1 * a.d1) + g1 * a.d2,
        g3 * (a.d1 * a.d1 * a.d1) + 3.0 * g2 * (a.d1 * a.d2) + g1 * a.d3,
    };
}

}  // namespace gradsense
