#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "christoffel/expression.hpp"

namespace christoffel {

using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline std::span<const double> as_span(const Point& p) { return {p.data(), static_cast<std::size_t>(p.size())}; }

/// Dense n x n x n array, row-major in (i, j, k).
class Tensor3 {
public:
    Tensor3() = default;
    explicit Tensor3(std::size_t n) : n_(n), data_(n * n * n, 0.0) {}

    std::size_t dim() const noexcept { return n_; }

    double& operator()(std::size_t i, std::size_t j, std::size_t k) { return data_[(i * n_ + j) * n_ + k]; }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return data_[(i * n_ + j) * n_ + k];
    }

    std::span<const double> flat() const noexcept { return data_; }

    /// Largest absolute entry.
    double max_abs() const noexcept;

    friend Tensor3 operator-(const Tensor3& a, const Tensor3& b);

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Largest absolute entry.
double max_abs(const Matrix& m);

/// Maximum absolute row sum.
double inf_norm(const Matrix& m);

/// Counts of upper and lower indices.
struct Valence {
    std::size_t contravariant = 0;
    std::size_t covariant = 0;

    std::size_t rank() const noexcept { return contravariant + covariant; }
    friend bool operator==(const Valence&, const Valence&) = default;
};

inline constexpr Valence kScalar{0, 0};
inline constexpr Valence kVector{1, 0};
inline constexpr Valence kCovector{0, 1};
inline constexpr Valence kCovariant2{0, 2};

/// A tensor field of rank <= 3 with one expression per component, stored
/// row-major with contravariant indices first.
class TensorField {
public:
    TensorField(std::size_t n, Valence valence, std::vector<Expression> components);

    std::size_t dim() const noexcept { return n_; }
    Valence valence() const noexcept { return valence_; }
    const std::vector<Expression>& components() const noexcept { return components_; }

    /// Component values at x, same layout as components().
    std::vector<double> eval(const Point& x) const;

private:
    std::size_t n_;
    Valence valence_;
    std::vector<Expression> components_;
};

inline constexpr double kSingularMetricThreshold = 1e-12;
inline constexpr double kMetricSymmetryTolerance = 1e-12;

/// Symmetric covariant rank-2 field g_{mu nu}(x).
class MetricField {
public:
    /// Rejects asymmetric input (AsymmetricMetricError). Off-diagonal pairs
    /// must be structurally identical or agree to 1e-12 at every probe point
    /// where both evaluate; `probes` are added to a built-in probe set.
    explicit MetricField(std::vector<std::vector<Expression>> g, std::span<const Point> probes = {});

    std::size_t dim() const noexcept { return n_; }

    /// Component (mu, nu); for mu > nu this is the (nu, mu) expression.
    const Expression& component(std::size_t mu, std::size_t nu) const;

    const std::vector<std::vector<Expression>>& components() const noexcept { return g_; }

private:
    std::size_t n_;
    std::vector<std::vector<Expression>> g_;
};

/// Parses an n x n matrix of expression strings into a metric field.
MetricField parse_metric(const std::vector<std::vector<std::string>>& text,
                         std::span<const std::string> coordinates, std::span<const Point> probes = {});

/// The metric, its inverse and first derivatives at a point.
struct MetricSample {
    Point x;
    Matrix g;
    Matrix g_inv;
    Tensor3 dg;  // dg(s, t, r) = d_s g_{t r}

    std::size_t dim() const noexcept { return static_cast<std::size_t>(g.rows()); }
};

/// Throws SingularMetricError if |det g| <= 1e-12, DomainError from evaluation.
MetricSample sample_metric(const MetricField& m, const Point& x);

/// Builds a sample from given values; g_inv by LU. Used for synthetic
/// derivative arrays. Throws SingularMetricError.
MetricSample make_sample(Point x, Matrix g, Tensor3 dg);

/// sum_mu u_mu v^mu.
double contract_scalar(std::span<const double> covector, std::span<const double> vector);

}  // namespace christoffel
