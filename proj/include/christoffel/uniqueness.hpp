#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "christoffel/connection.hpp"
#include "christoffel/tensor.hpp"

namespace christoffel {

class Rng;

/// Coefficients G^{c d e f}_{a b} of a connection linear in the metric
/// derivatives, Gamma^c_{ab} = G^{c d e f}_{a b} d_d g_{e f}. Stored dense,
/// row-major in (c, d, e, f, a, b).
class CoefficientTensor {
public:
    CoefficientTensor() = default;
    explicit CoefficientTensor(std::size_t n) : n_(n), data_(n * n * n * n * n * n, 0.0) {}

    std::size_t dim() const noexcept { return n_; }

    double& operator()(std::size_t c, std::size_t d, std::size_t e, std::size_t f, std::size_t a, std::size_t b) {
        return data_[index(c, d, e, f, a, b)];
    }
    double operator()(std::size_t c, std::size_t d, std::size_t e, std::size_t f, std::size_t a,
                      std::size_t b) const {
        return data_[index(c, d, e, f, a, b)];
    }

    double max_abs() const noexcept;

private:
    std::size_t index(std::size_t c, std::size_t d, std::size_t e, std::size_t f, std::size_t a,
                      std::size_t b) const {
        return ((((c * n_ + d) * n_ + e) * n_ + f) * n_ + a) * n_ + b;
    }

    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// The coefficient tensor that reproduces the Christoffel symbol:
///   G^{cdef}_{ab} = 1/4 [ g^{cf}(D^d_a D^e_b + D^d_b D^e_a)
///                       + g^{ce}(D^d_a D^f_b + D^d_b D^f_a)
///                       - g^{cd}(D^e_a D^f_b + D^e_b D^f_a) ]
/// with D the Kronecker delta. Symmetric in (e, f) and in (a, b).
CoefficientTensor closed_form_coefficients(const MetricSample& s);

/// Gamma^c_{ab} = sum G^{cdef}_{ab} dg(d, e, f), for every (a, b) without
/// assuming lower symmetry.
Tensor3 contract_coefficients(const CoefficientTensor& g, const Tensor3& dg);

/// contract_coefficients with the sample's own derivatives.
ConnectionCoefficients reconstruct_connection(const CoefficientTensor& g, const MetricSample& s);

enum class Parameterization {
    /// G restricted to the (e, f)- and (a, b)-symmetric subspace.
    Symmetric,
    /// All n^6 components free; the constraint sees the (e, f)-symmetric part.
    Unrestricted,
};

/// The linear conditions on G that make G . dg transform like a connection:
///   2 G^{c d e f}_{ab} g_{f h} + 2 G^{c e d f}_{ab} g_{f h}
///       = D^c_h (D^d_a D^e_b + D^d_b D^e_a)
/// one row per (c, h, a, b, d <= e); a <= b as well in the symmetric
/// parameterization.
struct ConstraintSystem {
    using Index6 = std::array<std::size_t, 6>;  // (c, d, e, f, a, b)

    std::size_t n = 0;
    Parameterization parameterization = Parameterization::Symmetric;
    Eigen::MatrixXd matrix;
    Eigen::VectorXd rhs;
    std::vector<Index6> unknowns;  // representative component of each unknown
    std::vector<Index6> rows;      // (c, h, a, b, d, e)

    std::size_t unknown_count() const noexcept { return unknowns.size(); }
    std::size_t equation_count() const noexcept { return rows.size(); }

    /// Flat unknown index of a component (any ordering of symmetric pairs).
    std::size_t unknown_index(std::size_t c, std::size_t d, std::size_t e, std::size_t f, std::size_t a,
                              std::size_t b) const;

    Eigen::VectorXd flatten(const CoefficientTensor& g) const;
    CoefficientTensor expand(const Eigen::VectorXd& v) const;

    /// max |matrix * v - rhs|.
    double residual(const Eigen::VectorXd& v) const;

    std::vector<std::size_t> index_table;  // n^6 -> unknown index
};

ConstraintSystem assemble_constraints(const MetricSample& s,
                                      Parameterization p = Parameterization::Symmetric);

inline constexpr double kRankThreshold = 1e-10;       // relative to the largest singular value
inline constexpr double kSolveResidualLimit = 1e-8;

struct ConstraintSolution {
    CoefficientTensor particular;
    Eigen::VectorXd particular_flat;
    std::size_t rank = 0;
    std::size_t nullspace_dim = 0;
    Eigen::MatrixXd nullspace;  // orthonormal columns
    std::vector<CoefficientTensor> nullspace_basis;
    Eigen::VectorXd singular_values;
    double residual = 0.0;            // max |A x - b| of the particular solution
    double nullspace_residual = 0.0;  // max over basis of max |A v|
};

/// Minimum-norm least-squares solution and orthonormal nullspace from an
/// SVD. Throws InconsistentSystemError if the best residual exceeds 1e-8.
ConstraintSolution solve_constraints(const ConstraintSystem& cs);

inline constexpr double kDefaultVerdictTolerance = 1e-9;
inline constexpr std::size_t kRandomDerivativeArrays = 20;

/// Symmetric-in-last-pair array with entries uniform in [-1, 1].
Tensor3 random_symmetric_dg(std::size_t n, Rng& rng);

/// Uniqueness analysis at one metric sample.
struct SampleAnalysis {
    std::size_t n = 0;
    std::size_t unknown_count = 0;
    std::size_t equation_count = 0;
    std::size_t rank = 0;
    std::size_t nullspace_dim = 0;
    double sigma_max = 0.0;
    double sigma_min = 0.0;
    double closed_form_residual = 0.0;      // closed form plugged into the system
    double particular_residual = 0.0;
    double nullspace_residual = 0.0;
    double nullspace_effective_max = 0.0;   // max |G_null . dg| over basis and dg arrays
    double particular_vs_christoffel = 0.0; // max |G_part . dg - Christoffel(dg)|
    double closed_form_vs_christoffel = 0.0;
    double induced_map_spread = 0.0;        // max |G_part . dg - G_closed . dg|
    bool non_generic_dg = false;            // the sample's own dg vanishes
};

SampleAnalysis analyze_sample(const MetricSample& s, Rng& rng);

/// Nullspace of the unrestricted parameterization and how much of it is
/// visible through contraction with symmetric derivative arrays.
struct UnrestrictedAnalysis {
    std::size_t unknown_count = 0;
    std::size_t equation_count = 0;
    std::size_t rank = 0;
    std::size_t nullspace_dim = 0;
    double nullspace_effective_max = 0.0;
    double particular_vs_christoffel = 0.0;
};

UnrestrictedAnalysis analyze_unrestricted(const MetricSample& s, Rng& rng);

enum class Verdict { Pass, Fail, NonGeneric };

std::string_view to_string(Verdict v);

struct UniquenessReport {
    SampleAnalysis primary;
    SampleAnalysis secondary;  // an independent random metric
    UnrestrictedAnalysis unrestricted;
    double tolerance = kDefaultVerdictTolerance;
    Verdict verdict = Verdict::Fail;
};

struct UniquenessOptions {
    double tolerance = kDefaultVerdictTolerance;
    bool include_unrestricted = true;
};

/// Solves the constraint system at `s` and at a second random metric drawn
/// from `rng`, compares the induced maps dg -> Gamma with the Christoffel
/// symbol, and decides the verdict. Throws GenericityError if the two
/// samples disagree on the nullspace dimension.
UniquenessReport uniqueness_report(const MetricSample& s, Rng& rng, const UniquenessOptions& options = {});
UniquenessReport uniqueness_report(const MetricField& m, const Point& x, Rng& rng,
                                   const UniquenessOptions& options = {});

}  // namespace christoffel
