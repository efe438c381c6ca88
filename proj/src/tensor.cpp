#include "christoffel/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "christoffel/error.hpp"

namespace christoffel {

double Tensor3::max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

Tensor3 operator-(const Tensor3& a, const Tensor3& b) {
    if (a.n_ != b.n_) throw ShapeError("tensor dimensions differ");
    Tensor3 r(a.n_);
    for (std::size_t k = 0; k < a.data_.size(); ++k) r.data_[k] = a.data_[k] - b.data_[k];
    return r;
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double inf_norm(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff(); }

namespace {

std::size_t ipow(std::size_t n, std::size_t k) {
    std::size_t r = 1;
    while (k-- > 0) r *= n;
    return r;
}

}  // namespace

TensorField::TensorField(std::size_t n, Valence valence, std::vector<Expression> components)
    : n_(n), valence_(valence), components_(std::move(components)) {
    if (valence_.rank() > 3) throw ShapeError("tensor rank above 3 is not supported");
    if (components_.size() != ipow(n_, valence_.rank())) {
        throw ShapeError("tensor field needs " + std::to_string(ipow(n_, valence_.rank())) +
                         " components, got " + std::to_string(components_.size()));
    }
    for (const auto& c : components_) {
        if (c.n_vars() != n_) throw ShapeError("tensor component is over the wrong number of coordinates");
    }
}

std::vector<double> TensorField::eval(const Point& x) const {
    std::vector<double> out;
    out.reserve(components_.size());
    for (const auto& c : components_) out.push_back(c.eval(as_span(x)));
    return out;
}

namespace {

// Deterministic probe points spread over [-1.3, 1.7]^n, away from the
// coordinate planes where many textbook metrics degenerate.
std::vector<Point> builtin_probes(std::size_t n) {
    constexpr double offsets[] = {0.37, 1.21, -0.83, 0.59, 1.67, -1.29, 0.11};
    std::vector<Point> probes;
    for (std::size_t p = 0; p < 5; ++p) {
        Point x(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) x[static_cast<Eigen::Index>(i)] = offsets[(p + 2 * i) % 7];
        probes.push_back(std::move(x));
    }
    return probes;
}

}  // namespace

MetricField::MetricField(std::vector<std::vector<Expression>> g, std::span<const Point> probes)
    : n_(g.size()), g_(std::move(g)) {
    if (n_ == 0) throw ShapeError("metric must have at least one row");
    for (const auto& row : g_) {
        if (row.size() != n_) throw ShapeError("metric must be square");
        for (const auto& c : row) {
            if (c.n_vars() != n_) throw ShapeError("metric component is over the wrong number of coordinates");
        }
    }
    std::vector<Point> all = builtin_probes(n_);
    for (const auto& p : probes) {
        if (static_cast<std::size_t>(p.size()) != n_) throw ShapeError("probe point has the wrong dimension");
        all.push_back(p);
    }
    for (std::size_t mu = 0; mu < n_; ++mu) {
        for (std::size_t nu = mu + 1; nu < n_; ++nu) {
            const Expression& a = g_[mu][nu];
            const Expression& b = g_[nu][mu];
            if (a == b) continue;
            std::size_t compared = 0;
            for (const auto& x : all) {
                double va = 0.0;
                double vb = 0.0;
                try {
                    va = a.eval(as_span(x));
                    vb = b.eval(as_span(x));
                } catch (const DomainError&) {
                    continue;
                }
                ++compared;
                if (std::abs(va - vb) > kMetricSymmetryTolerance) {
                    throw AsymmetricMetricError("metric components (" + std::to_string(mu) + "," +
                                                std::to_string(nu) + ") and (" + std::to_string(nu) +
                                                "," + std::to_string(mu) + ") differ");
                }
            }
            if (compared == 0) {
                throw AsymmetricMetricError("cannot verify symmetry of metric components (" +
                                            std::to_string(mu) + "," + std::to_string(nu) + ")");
            }
        }
    }
}

const Expression& MetricField::component(std::size_t mu, std::size_t nu) const {
    return mu <= nu ? g_[mu][nu] : g_[nu][mu];
}

MetricField parse_metric(const std::vector<std::vector<std::string>>& text,
                         std::span<const std::string> coordinates, std::span<const Point> probes) {
    std::vector<std::vector<Expression>> g;
    for (const auto& row : text) {
        std::vector<Expression> r;
        for (const auto& s : row) r.push_back(parse(s, coordinates));
        g.push_back(std::move(r));
    }
    return MetricField(std::move(g), probes);
}

MetricSample make_sample(Point x, Matrix g, Tensor3 dg) {
    const auto n = static_cast<std::size_t>(g.rows());
    if (g.cols() != g.rows() || dg.dim() != n || static_cast<std::size_t>(x.size()) != n) {
        throw ShapeError("metric sample dimensions disagree");
    }
    Eigen::PartialPivLU<Matrix> lu(g);
    const double det = lu.determinant();
    if (!(std::abs(det) > kSingularMetricThreshold)) {
        throw SingularMetricError("metric determinant " + std::to_string(det) + " is below the invertibility threshold");
    }
    Matrix g_inv = lu.inverse();
    return {std::move(x), std::move(g), std::move(g_inv), std::move(dg)};
}

MetricSample sample_metric(const MetricField& m, const Point& x) {
    const std::size_t n = m.dim();
    if (static_cast<std::size_t>(x.size()) != n) throw ShapeError("point has the wrong dimension");
    Matrix g(n, n);
    Tensor3 dg(n);
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t r = t; r < n; ++r) {
            const Expression& e = m.component(t, r);
            const double value = e.eval(as_span(x));
            g(t, r) = g(r, t) = value;
            for (std::size_t s = 0; s < n; ++s) {
                const double d = derivative2(e, as_span(x), s, s).d_i;
                dg(s, t, r) = dg(s, r, t) = d;
            }
        }
    }
    return make_sample(x, std::move(g), std::move(dg));
}

double contract_scalar(std::span<const double> covector, std::span<const double> vector) {
    if (covector.size() != vector.size()) throw ShapeError("contraction of arrays with different lengths");
    double s = 0.0;
    for (std::size_t i = 0; i < covector.size(); ++i) s += covector[i] * vector[i];
    return s;
}

}  // namespace christoffel
