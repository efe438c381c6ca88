#pragma once

#include <vector>

#include "christoffel/expression.hpp"
#include "christoffel/tensor.hpp"

namespace christoffel {

/// Gamma^lambda_{mu nu} at a point, stored as gamma(lambda, mu, nu). Always
/// symmetric in the lower pair; torsion is not representable.
struct ConnectionCoefficients {
    Tensor3 gamma;
    Point base_point;

    std::size_t dim() const noexcept { return gamma.dim(); }
};

/// Levi-Civita coefficients
///   Gamma^l_{mn} = 1/2 g^{lr} (d_m g_{nr} + d_n g_{mr} - d_r g_{mn}).
ConnectionCoefficients christoffel(const MetricSample& s);

/// Covariant derivative of a covector field,
///   result(mu, nu) = d_mu v_nu - Gamma^l_{mu nu} v_l.
/// Throws std::invalid_argument if x is not gamma's base point.
Matrix covariant_derivative_covector(const ConnectionCoefficients& gamma, const std::vector<Expression>& v,
                                     const Point& x);

/// Covariant derivative of the metric, one correction per lower index:
///   R(l, m, n) = d_l g_{mn} - Gamma^r_{lm} g_{rn} - Gamma^r_{ln} g_{mr}.
Tensor3 covariant_derivative_metric(const ConnectionCoefficients& gamma, const MetricSample& s);

/// Covariant derivative of the metric under its own Christoffel connection.
Tensor3 metricity_residual(const MetricSample& s);
Tensor3 metricity_residual(const MetricField& m, const Point& x);

}  // namespace christoffel
