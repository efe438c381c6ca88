#pragma once

#include <vector>

#include "christoffel/chart.hpp"
#include "christoffel/connection.hpp"
#include "christoffel/tensor.hpp"

namespace christoffel {

/// Everything needed to carry objects from the x-chart to the y-chart at one
/// point: y = forward(x), both Jacobians, and H = d^2 x / dy dy at y.
class TransformContext {
public:
    /// Throws InverseMismatchError if inverse(forward(x)) misses x by more
    /// than 1e-9, plus everything jacobian() throws.
    TransformContext(CoordinateMap map, Point x);

    const CoordinateMap& map() const noexcept { return map_; }
    const Point& x() const noexcept { return x_; }
    const Point& y() const noexcept { return y_; }
    const JacobianPair& jacobians() const noexcept { return j_; }
    const Tensor3& inverse_hessian() const noexcept { return h_; }
    std::size_t dim() const noexcept { return map_.dim(); }

private:
    CoordinateMap map_;
    Point x_;
    Point y_;
    JacobianPair j_;
    Tensor3 h_;
};

/// v'^a = (dy^a/dx^m) v^m.
Point push_vector(const TransformContext& ctx, const Point& v);

/// v'_a = (dx^m/dy^a) v_m.
Point push_covector(const TransformContext& ctx, const Point& v);

/// g'_{ab} = (dx^m/dy^a)(dx^n/dy^b) g_{mn}.
Matrix push_metric(const TransformContext& ctx, const Matrix& g);

/// Connection transformation law, written with the Hessian of the inverse map:
///   Gamma'^c_{ab} = (dx^m/dy^a)(dx^n/dy^b)(dy^c/dx^l) Gamma^l_{mn}
///                   + (dy^c/dx^l) d^2 x^l / dy^a dy^b.
ConnectionCoefficients push_connection(const TransformContext& ctx, const ConnectionCoefficients& gamma);

/// The same law written with the Hessian of the forward map:
///   Gamma'^c_{ab} = (dx^m/dy^a)(dx^n/dy^b) [(dy^c/dx^l) Gamma^l_{mn} - d^2 y^c / dx^m dx^n].
ConnectionCoefficients push_connection_forward_form(const TransformContext& ctx,
                                                    const ConnectionCoefficients& gamma);

struct CovectorPartialResidual {
    Matrix defect;        // d v'_b / dy^a minus the tensorial part, indexed (a, b)
    Matrix hessian_term;  // sum_m H(m, a, b) v_m(x)
    double mismatch = 0.0;  // max |defect - hessian_term|
};

/// How far the partial derivative of a covector field fails to transform as
/// a rank-2 tensor. The derivative of the pushed field is taken through the
/// inverse map by hyper-dual composition, independently of H.
CovectorPartialResidual covector_partial_residual(const TransformContext& ctx, const std::vector<Expression>& v);

struct GradientLawResidual {
    Point pushed;    // push_covector of the x-chart gradient
    Point composed;  // gradient of phi(x(y)) in the y-chart
    double mismatch = 0.0;
};

/// Checks that the gradient of a scalar transforms as a covector.
GradientLawResidual gradient_law_residual(const TransformContext& ctx, const Expression& phi);

/// Metric sample of the pushed field g'(y) at ctx.y(), derivatives by the
/// chain rule through the inverse map.
MetricSample pushed_metric_sample(const TransformContext& ctx, const MetricField& m);

struct TensorialityReport {
    ConnectionCoefficients pushed_connection;  // push_connection(christoffel(g at x))
    ConnectionCoefficients pulled_christoffel;  // christoffel(pushed g at y)
    double residual_connection_commute = 0.0;
    double residual_metricity_commute = 0.0;
};

/// Christoffel-then-transform versus transform-then-Christoffel, plus the
/// metricity residual in the y-chart.
TensorialityReport tensoriality_check(const TransformContext& ctx, const MetricField& m);

}  // namespace christoffel
