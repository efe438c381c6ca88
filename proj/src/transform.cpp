#include "christoffel/transform.hpp"

#include <cmath>
#include <sstream>

#include "christoffel/error.hpp"

namespace christoffel {

TransformContext::TransformContext(CoordinateMap map, Point x) : map_(std::move(map)), x_(std::move(x)) {
    if (static_cast<std::size_t>(x_.size()) != map_.dim()) throw ShapeError("point has the wrong dimension for this map");
    y_ = map_.apply(x_);
    const double miss = (map_.apply_inverse(y_) - x_).cwiseAbs().maxCoeff();
    if (!(miss <= kRoundTripTolerance)) {
        std::ostringstream msg;
        msg << "inverse(forward(x)) misses x by " << miss;
        throw InverseMismatchError(msg.str());
    }
    j_ = jacobian(map_, x_);
    h_ = hessian_inverse_map(map_, y_);
}

Point push_vector(const TransformContext& ctx, const Point& v) { return ctx.jacobians().fwd * v; }

Point push_covector(const TransformContext& ctx, const Point& v) { return ctx.jacobians().inv.transpose() * v; }

Matrix push_metric(const TransformContext& ctx, const Matrix& g) {
    const Matrix& inv = ctx.jacobians().inv;
    const std::size_t n = ctx.dim();
    Matrix out(n, n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b) {
            double acc = 0.0;
            for (std::size_t m = 0; m < n; ++m) {
                for (std::size_t k = 0; k < n; ++k) acc += inv(m, a) * inv(k, b) * g(m, k);
            }
            out(a, b) = out(b, a) = acc;
        }
    }
    return out;
}

namespace {

// (dx^m/dy^a)(dx^n/dy^b) T^c_{mn} for a lower-symmetric T indexed (c, m, n).
Tensor3 transform_lower(const Matrix& inv, const Tensor3& t) {
    const std::size_t n = t.dim();
    Tensor3 out(n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a; b < n; ++b) {
                double acc = 0.0;
                for (std::size_t m = 0; m < n; ++m) {
                    for (std::size_t k = 0; k < n; ++k) acc += inv(m, a) * inv(k, b) * t(c, m, k);
                }
                out(c, a, b) = out(c, b, a) = acc;
            }
        }
    }
    return out;
}

// (dy^c/dx^l) T^l_{..}
Tensor3 transform_upper(const Matrix& fwd, const Tensor3& t) {
    const std::size_t n = t.dim();
    Tensor3 out(n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                double acc = 0.0;
                for (std::size_t l = 0; l < n; ++l) acc += fwd(c, l) * t(l, a, b);
                out(c, a, b) = acc;
            }
        }
    }
    return out;
}

void check_connection(const TransformContext& ctx, const ConnectionCoefficients& gamma) {
    if (gamma.dim() != ctx.dim()) throw ShapeError("connection and map dimensions differ");
}

}  // namespace

ConnectionCoefficients push_connection(const TransformContext& ctx, const ConnectionCoefficients& gamma) {
    check_connection(ctx, gamma);
    const auto& j = ctx.jacobians();
    const Tensor3 homogeneous = transform_lower(j.inv, transform_upper(j.fwd, gamma.gamma));
    const Tensor3 inhomogeneous = transform_upper(j.fwd, ctx.inverse_hessian());
    const std::size_t n = ctx.dim();
    Tensor3 out(n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a; b < n; ++b) {
                out(c, a, b) = out(c, b, a) = homogeneous(c, a, b) + inhomogeneous(c, a, b);
            }
        }
    }
    return {std::move(out), ctx.y()};
}

ConnectionCoefficients push_connection_forward_form(const TransformContext& ctx,
                                                    const ConnectionCoefficients& gamma) {
    check_connection(ctx, gamma);
    const auto& j = ctx.jacobians();
    const Tensor3 k = hessian_forward_map(ctx.map(), ctx.x());
    const Tensor3 bracket = transform_upper(j.fwd, gamma.gamma) - k;
    return {transform_lower(j.inv, bracket), ctx.y()};
}

namespace {

// Inverse-map components evaluated at y with d1 seeded along `a` and d2 along `b`.
std::vector<HyperDual> seeded_inverse(const TransformContext& ctx, std::size_t a, std::size_t b) {
    std::vector<HyperDual> y(ctx.y().data(), ctx.y().data() + ctx.y().size());
    y[a].d1 = 1.0;
    y[b].d2 = 1.0;
    std::vector<HyperDual> x;
    x.reserve(ctx.dim());
    for (const auto& e : ctx.map().inverse()) x.push_back(e.eval(y));
    return x;
}

// Drops everything except the first-order tag along d1 = direction `a` of
// the seeded inverse (taken from its d2 slot).
std::vector<HyperDual> first_order_along_d2(const std::vector<HyperDual>& x) {
    std::vector<HyperDual> out;
    out.reserve(x.size());
    for (const auto& c : x) out.emplace_back(c.value, c.d2, 0.0, 0.0);
    return out;
}

}  // namespace

CovectorPartialResidual covector_partial_residual(const TransformContext& ctx, const std::vector<Expression>& v) {
    const std::size_t n = ctx.dim();
    if (v.size() != n) throw ShapeError("covector field has the wrong number of components");
    const Matrix& inv = ctx.jacobians().inv;
    const Tensor3& h = ctx.inverse_hessian();

    std::vector<double> values(n);
    Matrix partial(n, n);  // partial(m, k) = d_m v_k at x
    for (std::size_t k = 0; k < n; ++k) {
        values[k] = v[k].eval(as_span(ctx.x()));
        const auto grad = gradient(v[k], as_span(ctx.x()));
        for (std::size_t m = 0; m < n; ++m) partial(m, k) = grad[m];
    }

    CovectorPartialResidual out{Matrix(n, n), Matrix(n, n), 0.0};
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            // w_b(y) = (dx^k/dy^b) v_k(x(y)); differentiate along y^a.
            const auto x = seeded_inverse(ctx, b, a);
            const auto x_along_a = first_order_along_d2(x);
            double dw = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const HyperDual vk = v[k].eval(x_along_a);
                dw += x[k].d12 * vk.value + x[k].d1 * vk.d1;
            }
            const double tensorial = (inv.transpose() * partial * inv)(a, b);
            out.defect(a, b) = dw - tensorial;
            double hv = 0.0;
            for (std::size_t m = 0; m < n; ++m) hv += h(m, a, b) * values[m];
            out.hessian_term(a, b) = hv;
        }
    }
    out.mismatch = max_abs(out.defect - out.hessian_term);
    return out;
}

GradientLawResidual gradient_law_residual(const TransformContext& ctx, const Expression& phi) {
    const std::size_t n = ctx.dim();
    if (phi.n_vars() != n) throw ShapeError("scalar field has the wrong dimension");
    const auto grad = gradient(phi, as_span(ctx.x()));
    GradientLawResidual out;
    out.pushed = push_covector(ctx, Eigen::Map<const Point>(grad.data(), static_cast<Eigen::Index>(n)));
    out.composed = Point(static_cast<Eigen::Index>(n));
    for (std::size_t a = 0; a < n; ++a) {
        const auto x = first_order_along_d2(seeded_inverse(ctx, a, a));
        out.composed[static_cast<Eigen::Index>(a)] = phi.eval(x).d1;
    }
    out.mismatch = (out.pushed - out.composed).cwiseAbs().maxCoeff();
    return out;
}

MetricSample pushed_metric_sample(const TransformContext& ctx, const MetricField& m) {
    const std::size_t n = ctx.dim();
    if (m.dim() != n) throw ShapeError("metric and map dimensions differ");
    const MetricSample s = sample_metric(m, ctx.x());
    const Matrix& inv = ctx.jacobians().inv;
    const Tensor3& h = ctx.inverse_hessian();

    Matrix g = push_metric(ctx, s.g);
    Tensor3 dg(n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a; b < n; ++b) {
                double acc = 0.0;
                for (std::size_t p = 0; p < n; ++p) {
                    for (std::size_t q = 0; q < n; ++q) {
                        double dgx = 0.0;
                        for (std::size_t r = 0; r < n; ++r) dgx += s.dg(r, p, q) * inv(r, c);
                        acc += (h(p, c, a) * inv(q, b) + inv(p, a) * h(q, c, b)) * s.g(p, q) +
                               inv(p, a) * inv(q, b) * dgx;
                    }
                }
                dg(c, a, b) = dg(c, b, a) = acc;
            }
        }
    }
    return make_sample(ctx.y(), std::move(g), std::move(dg));
}

TensorialityReport tensoriality_check(const TransformContext& ctx, const MetricField& m) {
    const MetricSample at_x = sample_metric(m, ctx.x());
    const MetricSample at_y = pushed_metric_sample(ctx, m);
    TensorialityReport out{push_connection(ctx, christoffel(at_x)), christoffel(at_y), 0.0, 0.0};
    out.residual_connection_commute = (out.pushed_connection.gamma - out.pulled_christoffel.gamma).max_abs();
    out.residual_metricity_commute = metricity_residual(at_y).max_abs();
    return out;
}

}  // namespace christoffel
