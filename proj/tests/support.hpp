// Test-only oracles and generators. Nothing here calls the hyper-dual path.
#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "christoffel/chart.hpp"
#include "christoffel/random.hpp"
#include "christoffel/tensor.hpp"

namespace christoffel::testing {

inline const std::vector<std::string> kPolarNames{"r", "th"};
inline const std::vector<std::string> kCartesianNames{"X", "Y"};

/// Central difference of f along coordinate i.
inline double central_difference(const std::function<double(const Point&)>& f, const Point& x, std::size_t i,
                                  double h = 1e-5) {
    Point a = x;
    Point b = x;
    a[static_cast<Eigen::Index>(i)] += h;
    b[static_cast<Eigen::Index>(i)] -= h;
    return (f(a) - f(b)) / (2.0 * h);
}

/// Central difference of a mixed second partial.
inline double central_difference2(const std::function<double(const Point&)>& f, const Point& x, std::size_t i,
                                  std::size_t j, double h = 1e-4) {
    auto shifted = [&](double si, double sj) {
        Point p = x;
        p[static_cast<Eigen::Index>(i)] += si * h;
        p[static_cast<Eigen::Index>(j)] += sj * h;
        return f(p);
    };
    return (shifted(1, 1) - shifted(1, -1) - shifted(-1, 1) + shifted(-1, -1)) / (4.0 * h * h);
}

inline std::function<double(const Point&)> as_function(const Expression& e) {
    return [e](const Point& p) { return e.eval(as_span(p)); };
}

inline Point point(std::initializer_list<double> v) {
    Point p(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) p[i++] = x;
    return p;
}

/// x = Cartesian (X, Y) -> y = polar (r, th), valid off the negative X axis.
inline CoordinateMap cartesian_to_polar() {
    return CoordinateMap::parse(kCartesianNames, kPolarNames, {"sqrt(X^2 + Y^2)", "2*atan(Y/(sqrt(X^2 + Y^2) + X))"},
                                {"r*cos(th)", "r*sin(th)"});
}

/// x = polar (r, th) -> y = Cartesian (X, Y).
inline CoordinateMap polar_to_cartesian() {
    return CoordinateMap::parse(kPolarNames, kCartesianNames, {"r*cos(th)", "r*sin(th)"},
                                {"sqrt(X^2 + Y^2)", "2*atan(Y/(sqrt(X^2 + Y^2) + X))"});
}

/// y = A x + b with a fixed invertible A.
inline CoordinateMap affine_2d() {
    return CoordinateMap::parse({"a", "b"}, {"u", "v"}, {"2*a + b + 1", "a - 3*b - 2"},
                                {"(3*u + v - 1)/7", "(u - 2*v - 5)/7"});
}

/// Spherical-type 3D map x = (r, th, ph) -> Cartesian.
inline CoordinateMap spherical_to_cartesian() {
    return CoordinateMap::parse(
        {"r", "th", "ph"}, {"X", "Y", "Z"}, {"r*sin(th)*cos(ph)", "r*sin(th)*sin(ph)", "r*cos(th)"},
        {"sqrt(X^2 + Y^2 + Z^2)", "2*atan(sqrt(X^2 + Y^2)/(sqrt(X^2 + Y^2 + Z^2) + Z))",
         "2*atan(Y/(sqrt(X^2 + Y^2) + X))"});
}

/// Random expression text over the given names built from +, -, *, /, ^,
/// and the smooth functions; divisions and logs are guarded to stay inside
/// the domain on [-1, 1]^n.
std::string random_expression_text(Rng& rng, const std::vector<std::string>& names, int depth);

}  // namespace christoffel::testing
