#include "christoffel/uniqueness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "christoffel/error.hpp"
#include "christoffel/random.hpp"

namespace christoffel {

namespace {

constexpr double delta(std::size_t i, std::size_t j) { return i == j ? 1.0 : 0.0; }

std::size_t pow6(std::size_t n) { return n * n * n * n * n * n; }

}  // namespace

double CoefficientTensor::max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

CoefficientTensor closed_form_coefficients(const MetricSample& s) {
    const std::size_t n = s.dim();
    const Matrix& gi = s.g_inv;
    CoefficientTensor out(n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d)
            for (std::size_t e = 0; e < n; ++e)
                for (std::size_t f = 0; f < n; ++f)
                    for (std::size_t a = 0; a < n; ++a)
                        for (std::size_t b = 0; b < n; ++b) {
                            const double t1 = gi(c, f) * (delta(d, a) * delta(e, b) + delta(d, b) * delta(e, a));
                            const double t2 = gi(c, e) * (delta(d, a) * delta(f, b) + delta(d, b) * delta(f, a));
                            const double t3 = gi(c, d) * (delta(e, a) * delta(f, b) + delta(e, b) * delta(f, a));
                            out(c, d, e, f, a, b) = 0.25 * (t1 + t2 - t3);
                        }
    return out;
}

Tensor3 contract_coefficients(const CoefficientTensor& g, const Tensor3& dg) {
    const std::size_t n = g.dim();
    if (dg.dim() != n) throw ShapeError("coefficient tensor and derivative array dimensions differ");
    Tensor3 out(n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                double acc = 0.0;
                for (std::size_t d = 0; d < n; ++d)
                    for (std::size_t e = 0; e < n; ++e)
                        for (std::size_t f = 0; f < n; ++f) acc += g(c, d, e, f, a, b) * dg(d, e, f);
                out(c, a, b) = acc;
            }
    return out;
}

ConnectionCoefficients reconstruct_connection(const CoefficientTensor& g, const MetricSample& s) {
    return {contract_coefficients(g, s.dg), s.x};
}

// ---------------------------------------------------------------------------
// Constraint system

std::size_t ConstraintSystem::unknown_index(std::size_t c, std::size_t d, std::size_t e, std::size_t f,
                                            std::size_t a, std::size_t b) const {
    return index_table[((((c * n + d) * n + e) * n + f) * n + a) * n + b];
}

Eigen::VectorXd ConstraintSystem::flatten(const CoefficientTensor& g) const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(unknowns.size()));
    for (std::size_t k = 0; k < unknowns.size(); ++k) {
        const auto& [c, d, e, f, a, b] = unknowns[k];
        v[static_cast<Eigen::Index>(k)] = g(c, d, e, f, a, b);
    }
    return v;
}

CoefficientTensor ConstraintSystem::expand(const Eigen::VectorXd& v) const {
    CoefficientTensor g(n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d)
            for (std::size_t e = 0; e < n; ++e)
                for (std::size_t f = 0; f < n; ++f)
                    for (std::size_t a = 0; a < n; ++a)
                        for (std::size_t b = 0; b < n; ++b) {
                            g(c, d, e, f, a, b) = v[static_cast<Eigen::Index>(unknown_index(c, d, e, f, a, b))];
                        }
    return g;
}

double ConstraintSystem::residual(const Eigen::VectorXd& v) const {
    return (matrix * v - rhs).cwiseAbs().maxCoeff();
}

ConstraintSystem assemble_constraints(const MetricSample& s, Parameterization p) {
    const std::size_t n = s.dim();
    const bool symmetric = p == Parameterization::Symmetric;
    ConstraintSystem cs;
    cs.n = n;
    cs.parameterization = p;
    cs.index_table.assign(pow6(n), 0);

    // Enumerate unknowns; symmetric pairs share the representative with e <= f, a <= b.
    std::size_t flat = 0;
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d)
            for (std::size_t e = 0; e < n; ++e)
                for (std::size_t f = 0; f < n; ++f)
                    for (std::size_t a = 0; a < n; ++a)
                        for (std::size_t b = 0; b < n; ++b, ++flat) {
                            if (symmetric && (f < e || b < a)) continue;
                            cs.index_table[flat] = cs.unknowns.size();
                            cs.unknowns.push_back({c, d, e, f, a, b});
                        }
    if (symmetric) {
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t d = 0; d < n; ++d)
                for (std::size_t e = 0; e < n; ++e)
                    for (std::size_t f = 0; f < n; ++f)
                        for (std::size_t a = 0; a < n; ++a)
                            for (std::size_t b = 0; b < n; ++b) {
                                const std::size_t lo_ef = std::min(e, f), hi_ef = std::max(e, f);
                                const std::size_t lo_ab = std::min(a, b), hi_ab = std::max(a, b);
                                cs.index_table[((((c * n + d) * n + e) * n + f) * n + a) * n + b] =
                                    cs.index_table[((((c * n + d) * n + lo_ef) * n + hi_ef) * n + lo_ab) * n + hi_ab];
                            }
    }

    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t h = 0; h < n; ++h)
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = symmetric ? a : 0; b < n; ++b)
                    for (std::size_t d = 0; d < n; ++d)
                        for (std::size_t e = d; e < n; ++e) cs.rows.push_back({c, h, a, b, d, e});

    const auto rows = static_cast<Eigen::Index>(cs.rows.size());
    const auto cols = static_cast<Eigen::Index>(cs.unknowns.size());
    cs.matrix = Eigen::MatrixXd::Zero(rows, cols);
    cs.rhs = Eigen::VectorXd::Zero(rows);

    // In the unrestricted parameterization only the (e, f)-symmetric part of
    // G enters, so each component contributes with weight 1/2 twice.
    const double w = symmetric ? 1.0 : 0.5;
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& [c, h, a, b, d, e] = cs.rows[static_cast<std::size_t>(r)];
        for (std::size_t f = 0; f < n; ++f) {
            const double coeff = 2.0 * s.g(f, h) * w;
            if (coeff == 0.0) continue;
            const std::size_t terms[4] = {
                cs.unknown_index(c, d, e, f, a, b), cs.unknown_index(c, e, d, f, a, b),
                cs.unknown_index(c, d, f, e, a, b), cs.unknown_index(c, e, f, d, a, b)};
            const std::size_t used = symmetric ? 2 : 4;
            for (std::size_t t = 0; t < used; ++t) {
                cs.matrix(r, static_cast<Eigen::Index>(terms[t])) += coeff;
            }
        }
        cs.rhs[r] = delta(c, h) * (delta(d, a) * delta(e, b) + delta(d, b) * delta(e, a));
    }
    return cs;
}

ConstraintSolution solve_constraints(const ConstraintSystem& cs) {
    // Jacobi rather than divide-and-conquer: the singular values come in large
    // degenerate clusters, which Eigen 3.4's BDCSVD resolves incorrectly.
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(cs.matrix, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double sigma_max = sigma.size() > 0 ? sigma[0] : 0.0;
    const double threshold = kRankThreshold * sigma_max;
    Eigen::Index rank = 0;
    while (rank < sigma.size() && sigma[rank] > threshold) ++rank;

    const Eigen::MatrixXd& u = svd.matrixU();
    const Eigen::MatrixXd& v = svd.matrixV();
    const Eigen::VectorXd coords = (u.leftCols(rank).transpose() * cs.rhs).cwiseQuotient(sigma.head(rank));

    ConstraintSolution out;
    out.particular_flat = v.leftCols(rank) * coords;
    out.particular = cs.expand(out.particular_flat);
    out.rank = static_cast<std::size_t>(rank);
    out.nullspace = v.rightCols(v.cols() - rank);
    out.nullspace_dim = static_cast<std::size_t>(out.nullspace.cols());
    out.singular_values = sigma;
    out.residual = cs.residual(out.particular_flat);
    for (Eigen::Index k = 0; k < out.nullspace.cols(); ++k) {
        out.nullspace_basis.push_back(cs.expand(out.nullspace.col(k)));
        out.nullspace_residual = std::max(out.nullspace_residual, (cs.matrix * out.nullspace.col(k)).cwiseAbs().maxCoeff());
    }
    if (!(out.residual <= kSolveResidualLimit)) {
        std::ostringstream msg;
        msg << "constraint system is inconsistent: least-squares residual " << out.residual;
        throw InconsistentSystemError(msg.str());
    }
    return out;
}

Tensor3 random_symmetric_dg(std::size_t n, Rng& rng) {
    Tensor3 dg(n);
    for (std::size_t d = 0; d < n; ++d)
        for (std::size_t e = 0; e < n; ++e)
            for (std::size_t f = e; f < n; ++f) dg(d, e, f) = dg(d, f, e) = rng.uniform(-1.0, 1.0);
    return dg;
}

// ---------------------------------------------------------------------------
// Reports

namespace {

// The sample's own dg followed by kRandomDerivativeArrays random ones.
std::vector<Tensor3> probe_arrays(const MetricSample& s, Rng& rng) {
    std::vector<Tensor3> out{s.dg};
    for (std::size_t k = 0; k < kRandomDerivativeArrays; ++k) out.push_back(random_symmetric_dg(s.dim(), rng));
    return out;
}

Tensor3 christoffel_for(const MetricSample& s, const Tensor3& dg) {
    return christoffel(make_sample(s.x, s.g, dg)).gamma;
}

}  // namespace

SampleAnalysis analyze_sample(const MetricSample& s, Rng& rng) {
    const ConstraintSystem cs = assemble_constraints(s);
    const ConstraintSolution sol = solve_constraints(cs);
    const CoefficientTensor closed = closed_form_coefficients(s);

    SampleAnalysis a;
    a.n = s.dim();
    a.unknown_count = cs.unknown_count();
    a.equation_count = cs.equation_count();
    a.rank = sol.rank;
    a.nullspace_dim = sol.nullspace_dim;
    a.sigma_max = sol.singular_values.size() > 0 ? sol.singular_values[0] : 0.0;
    a.sigma_min = sol.singular_values.size() > 0 ? sol.singular_values[sol.singular_values.size() - 1] : 0.0;
    a.closed_form_residual = cs.residual(cs.flatten(closed));
    a.particular_residual = sol.residual;
    a.nullspace_residual = sol.nullspace_residual;
    a.non_generic_dg = s.dg.max_abs() == 0.0;

    for (const Tensor3& dg : probe_arrays(s, rng)) {
        const Tensor3 expected = christoffel_for(s, dg);
        const Tensor3 particular = contract_coefficients(sol.particular, dg);
        const Tensor3 from_closed = contract_coefficients(closed, dg);
        a.particular_vs_christoffel = std::max(a.particular_vs_christoffel, (particular - expected).max_abs());
        a.closed_form_vs_christoffel = std::max(a.closed_form_vs_christoffel, (from_closed - expected).max_abs());
        a.induced_map_spread = std::max(a.induced_map_spread, (particular - from_closed).max_abs());
        for (const auto& null : sol.nullspace_basis) {
            a.nullspace_effective_max = std::max(a.nullspace_effective_max, contract_coefficients(null, dg).max_abs());
        }
    }
    return a;
}

UnrestrictedAnalysis analyze_unrestricted(const MetricSample& s, Rng& rng) {
    const ConstraintSystem cs = assemble_constraints(s, Parameterization::Unrestricted);
    const ConstraintSolution sol = solve_constraints(cs);
    UnrestrictedAnalysis a;
    a.unknown_count = cs.unknown_count();
    a.equation_count = cs.equation_count();
    a.rank = sol.rank;
    a.nullspace_dim = sol.nullspace_dim;
    for (const Tensor3& dg : probe_arrays(s, rng)) {
        const Tensor3 expected = christoffel_for(s, dg);
        a.particular_vs_christoffel =
            std::max(a.particular_vs_christoffel, (contract_coefficients(sol.particular, dg) - expected).max_abs());
        for (const auto& null : sol.nullspace_basis) {
            a.nullspace_effective_max = std::max(a.nullspace_effective_max, contract_coefficients(null, dg).max_abs());
        }
    }
    return a;
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "PASS";
        case Verdict::Fail: return "FAIL";
        case Verdict::NonGeneric: return "NON-GENERIC";
    }
    return "FAIL";
}

namespace {

bool sample_passes(const SampleAnalysis& a, double tol) {
    return a.closed_form_residual <= 1e-10 && a.nullspace_effective_max <= tol &&
           a.particular_vs_christoffel <= tol && a.closed_form_vs_christoffel <= tol;
}

}  // namespace

UniquenessReport uniqueness_report(const MetricSample& s, Rng& rng, const UniquenessOptions& options) {
    UniquenessReport r;
    r.tolerance = options.tolerance;
    r.primary = analyze_sample(s, rng);

    const std::size_t n = s.dim();
    const MetricField other = random_spd_metric(n, rng);
    const Point other_x = random_point(n, rng);
    r.secondary = analyze_sample(sample_metric(other, other_x), rng);

    if (r.primary.nullspace_dim != r.secondary.nullspace_dim) {
        throw GenericityError("nullspace dimension differs between samples (" +
                              std::to_string(r.primary.nullspace_dim) + " vs " +
                              std::to_string(r.secondary.nullspace_dim) + ")");
    }
    if (options.include_unrestricted) r.unrestricted = analyze_unrestricted(s, rng);

    const bool unrestricted_ok = !options.include_unrestricted ||
                                 (r.unrestricted.nullspace_effective_max <= options.tolerance &&
                                  r.unrestricted.particular_vs_christoffel <= options.tolerance);
    const bool ok = sample_passes(r.primary, options.tolerance) && sample_passes(r.secondary, options.tolerance) &&
                    unrestricted_ok;
    if (!ok) {
        r.verdict = Verdict::Fail;
    } else {
        r.verdict = r.primary.non_generic_dg ? Verdict::NonGeneric : Verdict::Pass;
    }
    return r;
}

UniquenessReport uniqueness_report(const MetricField& m, const Point& x, Rng& rng, const UniquenessOptions& options) {
    return uniqueness_report(sample_metric(m, x), rng, options);
}

}  // namespace christoffel
