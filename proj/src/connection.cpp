#include "christoffel/connection.hpp"

#include <stdexcept>

#include "christoffel/error.hpp"

namespace christoffel {

ConnectionCoefficients christoffel(const MetricSample& s) {
    const std::size_t n = s.dim();
    Tensor3 gamma(n);
    for (std::size_t l = 0; l < n; ++l) {
        for (std::size_t m = 0; m < n; ++m) {
            for (std::size_t k = m; k < n; ++k) {
                double acc = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    acc += s.g_inv(l, r) * (s.dg(m, k, r) + s.dg(k, m, r) - s.dg(r, m, k));
                }
                gamma(l, m, k) = gamma(l, k, m) = 0.5 * acc;
            }
        }
    }
    return {std::move(gamma), s.x};
}

Matrix covariant_derivative_covector(const ConnectionCoefficients& gamma, const std::vector<Expression>& v,
                                     const Point& x) {
    const std::size_t n = gamma.dim();
    if (v.size() != n || static_cast<std::size_t>(x.size()) != n) {
        throw ShapeError("covector field and connection dimensions differ");
    }
    if (gamma.base_point.size() != x.size() || (gamma.base_point - x).cwiseAbs().maxCoeff() > 0.0) {
        throw std::invalid_argument("connection was sampled at a different point");
    }
    std::vector<double> values(n);
    Matrix result(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        values[k] = v[k].eval(as_span(x));
        const auto grad = gradient(v[k], as_span(x));
        for (std::size_t m = 0; m < n; ++m) result(m, k) = grad[m];
    }
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t k = 0; k < n; ++k) {
            double corr = 0.0;
            for (std::size_t l = 0; l < n; ++l) corr += gamma.gamma(l, m, k) * values[l];
            result(m, k) -= corr;
        }
    }
    return result;
}

Tensor3 covariant_derivative_metric(const ConnectionCoefficients& gamma, const MetricSample& s) {
    const std::size_t n = s.dim();
    if (gamma.dim() != n) throw ShapeError("connection and metric dimensions differ");
    Tensor3 r(n);
    for (std::size_t l = 0; l < n; ++l) {
        for (std::size_t m = 0; m < n; ++m) {
            for (std::size_t k = 0; k < n; ++k) {
                double corr = 0.0;
                for (std::size_t p = 0; p < n; ++p) {
                    corr += gamma.gamma(p, l, m) * s.g(p, k) + gamma.gamma(p, l, k) * s.g(m, p);
                }
                r(l, m, k) = s.dg(l, m, k) - corr;
            }
        }
    }
    return r;
}

Tensor3 metricity_residual(const MetricSample& s) { return covariant_derivative_metric(christoffel(s), s); }

Tensor3 metricity_residual(const MetricField& m, const Point& x) { return metricity_residual(sample_metric(m, x)); }

}  // namespace christoffel
