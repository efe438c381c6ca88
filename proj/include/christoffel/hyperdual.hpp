#pragma once

#include <cmath>

namespace christoffel {

// Truncated second-order Taylor number f + f_i e1 + f_j e2 + f_ij e1 e2 with
// e1^2 = e2^2 = 0. Seeding d1 along x_i and d2 along x_j yields the exact
// first partials and the mixed partial d^2 f / dx_i dx_j in one evaluation.
//
// Every operation combines the two first-order tags symmetrically, so
// swapping the seeds swaps d1 and d2 and leaves d12 bitwise unchanged.
struct HyperDual {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double d12 = 0.0;

    constexpr HyperDual() = default;
    constexpr HyperDual(double v) : value(v) {}  // NOLINT: implicit constant lift
    constexpr HyperDual(double v, double a, double b, double ab) : value(v), d1(a), d2(b), d12(ab) {}
};

// Chain rule for a scalar function with value f, first derivative f1 and
// second derivative f2 at a.value.
constexpr HyperDual chain(const HyperDual& a, double f, double f1, double f2) {
    return {f, f1 * a.d1, f1 * a.d2, f1 * a.d12 + f2 * (a.d1 * a.d2)};
}

constexpr HyperDual operator-(const HyperDual& a) { return {-a.value, -a.d1, -a.d2, -a.d12}; }

constexpr HyperDual operator+(const HyperDual& a, const HyperDual& b) {
    return {a.value + b.value, a.d1 + b.d1, a.d2 + b.d2, a.d12 + b.d12};
}

constexpr HyperDual operator-(const HyperDual& a, const HyperDual& b) {
    return {a.value - b.value, a.d1 - b.d1, a.d2 - b.d2, a.d12 - b.d12};
}

constexpr HyperDual operator*(const HyperDual& a, const HyperDual& b) {
    return {a.value * b.value,
            a.value * b.d1 + a.d1 * b.value,
            a.value * b.d2 + a.d2 * b.value,
            a.value * b.d12 + (a.d1 * b.d2 + a.d2 * b.d1) + a.d12 * b.value};
}

constexpr HyperDual reciprocal(const HyperDual& a) {
    const double r = 1.0 / a.value;
    return chain(a, r, -r * r, 2.0 * r * r * r);
}

constexpr HyperDual operator/(const HyperDual& a, const HyperDual& b) { return a * reciprocal(b); }

inline HyperDual sin(const HyperDual& a) {
    const double s = std::sin(a.value);
    return chain(a, s, std::cos(a.value), -s);
}

inline HyperDual cos(const HyperDual& a) {
    const double c = std::cos(a.value);
    return chain(a, c, -std::sin(a.value), -c);
}

inline HyperDual tan(const HyperDual& a) {
    const double t = std::tan(a.value);
    const double sec2 = 1.0 + t * t;
    return chain(a, t, sec2, 2.0 * t * sec2);
}

inline HyperDual exp(const HyperDual& a) {
    const double e = std::exp(a.value);
    return chain(a, e, e, e);
}

inline HyperDual log(const HyperDual& a) {
    const double r = 1.0 / a.value;
    return chain(a, std::log(a.value), r, -r * r);
}

inline HyperDual sqrt(const HyperDual& a) {
    const double s = std::sqrt(a.value);
    const double f1 = 0.5 / s;
    return chain(a, s, f1, -0.5 * f1 / a.value);
}

inline HyperDual sinh(const HyperDual& a) {
    const double s = std::sinh(a.value);
    return chain(a, s, std::cosh(a.value), s);
}

inline HyperDual cosh(const HyperDual& a) {
    const double c = std::cosh(a.value);
    return chain(a, c, std::sinh(a.value), c);
}

inline HyperDual tanh(const HyperDual& a) {
    const double t = std::tanh(a.value);
    const double sech2 = 1.0 - t * t;
    return chain(a, t, sech2, -2.0 * t * sech2);
}

inline HyperDual atan(const HyperDual& a) {
    const double q = 1.0 / (1.0 + a.value * a.value);
    return chain(a, std::atan(a.value), q, -2.0 * a.value * q * q);
}

inline bool isfinite(const HyperDual& a) {
    return std::isfinite(a.value) && std::isfinite(a.d1) && std::isfinite(a.d2) && std::isfinite(a.d12);
}

}  // namespace christoffel
