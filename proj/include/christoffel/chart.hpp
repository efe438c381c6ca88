#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "christoffel/expression.hpp"
#include "christoffel/tensor.hpp"

namespace christoffel {

inline constexpr double kSingularMapThreshold = 1e-12;
inline constexpr double kJacobianProductTolerance = 1e-10;
inline constexpr double kRoundTripTolerance = 1e-9;

/// A change of coordinates y(x) together with its inverse x(y). Both
/// directions are user supplied; consistency is checked where the map is
/// used rather than assumed.
class CoordinateMap {
public:
    CoordinateMap(std::vector<std::string> x_names, std::vector<std::string> y_names,
                  std::vector<Expression> forward, std::vector<Expression> inverse);

    /// Parses forward expressions over x_names and inverse ones over y_names.
    static CoordinateMap parse(std::vector<std::string> x_names, std::vector<std::string> y_names,
                               const std::vector<std::string>& forward,
                               const std::vector<std::string>& inverse);

    static CoordinateMap identity(std::size_t n);

    std::size_t dim() const noexcept { return forward_.size(); }
    const std::vector<std::string>& x_names() const noexcept { return x_names_; }
    const std::vector<std::string>& y_names() const noexcept { return y_names_; }
    const std::vector<Expression>& forward() const noexcept { return forward_; }
    const std::vector<Expression>& inverse() const noexcept { return inverse_; }

    Point apply(const Point& x) const;
    Point apply_inverse(const Point& y) const;

    /// |inverse(forward(x)) - x|_inf.
    double round_trip_error(const Point& x) const;

private:
    std::vector<std::string> x_names_;
    std::vector<std::string> y_names_;
    std::vector<Expression> forward_;
    std::vector<Expression> inverse_;
};

/// x -> g(f(x)), with g's inverse composed the other way round.
CoordinateMap compose(const CoordinateMap& first, const CoordinateMap& second);

struct JacobianPair {
    Matrix fwd;  // fwd(alpha, mu) = dy^alpha / dx^mu at x
    Matrix inv;  // inv(mu, alpha) = dx^mu / dy^alpha at y = forward(x)
};

/// Jacobians of both directions. Throws SingularMapError if |det fwd| < 1e-12
/// and InverseMismatchError if |fwd * inv - I|_inf > 1e-10.
JacobianPair jacobian(const CoordinateMap& map, const Point& x);

/// Jacobian matrix of a list of expressions.
Matrix jacobian_of(const std::vector<Expression>& components, const Point& at);

/// H(mu, alpha, beta) = d^2 x^mu / dy^alpha dy^beta, symmetric in (alpha, beta).
Tensor3 hessian_inverse_map(const CoordinateMap& map, const Point& y);

/// K(alpha, mu, nu) = d^2 y^alpha / dx^mu dx^nu.
Tensor3 hessian_forward_map(const CoordinateMap& map, const Point& x);

}  // namespace christoffel
