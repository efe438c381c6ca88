#include "christoffel/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "christoffel/connection.hpp"
#include "christoffel/document.hpp"
#include "christoffel/random.hpp"
#include "christoffel/transform.hpp"
#include "christoffel/uniqueness.hpp"

namespace christoffel::cli {

namespace {

using ojson = nlohmann::ordered_json;

constexpr const char* kIndexOrder3 = "row-major [upper][lower][lower], 0-based";
constexpr const char* kIndexOrderDerivative = "row-major [derivative][lower][lower], 0-based";

ojson to_json(const Point& p) { return std::vector<double>(p.data(), p.data() + p.size()); }

ojson to_json(const Matrix& m) {
    ojson rows = ojson::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        std::vector<double> row(static_cast<std::size_t>(m.cols()));
        for (Eigen::Index j = 0; j < m.cols(); ++j) row[static_cast<std::size_t>(j)] = m(i, j);
        rows.push_back(row);
    }
    return rows;
}

ojson to_json(const Tensor3& t) { return std::vector<double>(t.flat().begin(), t.flat().end()); }

/// A residual with the bound it is judged against.
struct Check {
    std::string name;
    double value;
    double bound;
};

class Report {
public:
    explicit Report(std::string command) { body_["command"] = std::move(command); }

    ojson& inputs() { return body_["inputs"]; }
    ojson& results() { return body_["results"]; }

    void residual(const std::string& name, double value) { residuals_[name] = value; }

    void check(const std::string& name, double value, double bound) {
        residual(name, value);
        checks_.push_back({name, value, bound});
    }

    bool all_checks_pass() const {
        for (const auto& c : checks_) {
            if (!(c.value <= c.bound)) return false;
        }
        return true;
    }

    void set_verdict(std::string_view v) { verdict_ = std::string(v); }

    void write(std::ostream& out) {
        if (!residuals_.empty()) body_["residuals"] = residuals_;
        if (!checks_.empty()) {
            ojson bounds;
            for (const auto& c : checks_) bounds[c.name] = c.bound;
            body_["bounds"] = bounds;
        }
        if (verdict_) body_["verdict"] = *verdict_;
        body_["tool_version"] = kToolVersion;
        out << body_.dump(2) << '\n';
    }

    ojson& body() { return body_; }

private:
    ojson body_;
    ojson residuals_ = ojson::object();
    std::vector<Check> checks_;
    std::optional<std::string> verdict_;
};

void write_error(std::ostream& out, const std::string& command, const std::string& kind, const std::string& message,
                 const ojson& extra = ojson::object()) {
    ojson body;
    body["command"] = command;
    ojson error;
    error["kind"] = kind;
    error["message"] = message;
    for (const auto& [k, v] : extra.items()) error[k] = v;
    body["error"] = error;
    body["tool_version"] = kToolVersion;
    out << body.dump(2) << '\n';
}

class InputError : public Error {
public:
    using Error::Error;
};

nlohmann::json load_json(const std::string& file, std::istream& in) {
    std::string text;
    if (file == "-") {
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    } else {
        std::ifstream f(file);
        if (!f) throw InputError("cannot open '" + file + "'");
        std::ostringstream buf;
        buf << f.rdbuf();
        text = buf.str();
    }
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("", std::string("invalid JSON: ") + e.what());
    }
}

Problem load_problem(const std::string& file, std::istream& in) { return build_problem(read_document(load_json(file, in))); }

double parse_tolerance(const Environment& env) {
    if (!env.tolerance) return kDefaultVerdictTolerance;
    const std::string& s = *env.tolerance;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !(v > 0.0) || !std::isfinite(v)) {
        throw InputError("CHRISTOFFEL_TOL must be a positive number, got '" + s + "'");
    }
    return v;
}

int finish(Report& report, std::ostream& out, bool with_verdict) {
    int code = kSuccess;
    if (with_verdict) {
        const bool ok = report.all_checks_pass();
        report.set_verdict(ok ? "PASS" : "FAIL");
        code = ok ? kSuccess : kVerdictFail;
    }
    report.write(out);
    return code;
}

// --- commands ---------------------------------------------------------------

int cmd_christoffel(const Problem& p, std::ostream& out) {
    const MetricSample s = sample_metric(p.metric, p.point);
    const ConnectionCoefficients gamma = christoffel(s);
    Report report("christoffel");
    report.inputs() = document_digest(p.doc);
    auto& r = report.results();
    r["dimension"] = s.dim();
    r["point"] = to_json(s.x);
    r["metric"] = to_json(s.g);
    r["metric_inverse"] = to_json(s.g_inv);
    r["metric_derivative"] = to_json(s.dg);
    r["metric_derivative_index_order"] = kIndexOrderDerivative;
    r["gamma"] = to_json(gamma.gamma);
    r["gamma_index_order"] = kIndexOrder3;
    return finish(report, out, false);
}

int cmd_metricity(const Problem& p, double tol, std::ostream& out) {
    const MetricSample s = sample_metric(p.metric, p.point);
    const Tensor3 residual = metricity_residual(s);
    Report report("metricity");
    report.inputs() = document_digest(p.doc);
    auto& r = report.results();
    r["dimension"] = s.dim();
    r["point"] = to_json(s.x);
    r["gamma"] = to_json(christoffel(s).gamma);
    r["gamma_index_order"] = kIndexOrder3;
    r["residual"] = to_json(residual);
    r["residual_index_order"] = kIndexOrderDerivative;
    const double dg_inf = s.dg.max_abs();
    report.residual("dg_inf", dg_inf);
    report.check("metricity_inf", residual.max_abs(), tol * (1.0 + dg_inf));
    return finish(report, out, true);
}

const CoordinateMap& require_map(const Problem& p) {
    if (!p.map) throw SchemaError("/map", "this command needs a coordinate map");
    return *p.map;
}

int cmd_tensoriality(const Problem& p, double tol, std::ostream& out) {
    const TransformContext ctx(require_map(p), p.point);
    const TensorialityReport t = tensoriality_check(ctx, p.metric);
    const MetricSample at_y = pushed_metric_sample(ctx, p.metric);
    Report report("tensoriality");
    report.inputs() = document_digest(p.doc);
    auto& r = report.results();
    r["x"] = to_json(ctx.x());
    r["y"] = to_json(ctx.y());
    r["pushed_gamma"] = to_json(t.pushed_connection.gamma);
    r["christoffel_of_pushed_metric"] = to_json(t.pulled_christoffel.gamma);
    r["gamma_index_order"] = kIndexOrder3;
    report.check("connection_commute_inf", t.residual_connection_commute,
                 tol * (1.0 + t.pulled_christoffel.gamma.max_abs()));
    report.check("metricity_commute_inf", t.residual_metricity_commute, tol * (1.0 + at_y.dg.max_abs()));
    return finish(report, out, true);
}

int cmd_transform_check(const Problem& p, double tol, std::ostream& out) {
    const TransformContext ctx(require_map(p), p.point);
    const auto& j = ctx.jacobians();
    const auto n = static_cast<Eigen::Index>(ctx.dim());
    const MetricSample at_x = sample_metric(p.metric, ctx.x());
    const TensorialityReport t = tensoriality_check(ctx, p.metric);
    const MetricSample at_y = pushed_metric_sample(ctx, p.metric);
    const ConnectionCoefficients gamma_x = christoffel(at_x);
    const ConnectionCoefficients forward_form = push_connection_forward_form(ctx, gamma_x);

    Report report("transform-check");
    report.inputs() = document_digest(p.doc);
    auto& r = report.results();
    r["x"] = to_json(ctx.x());
    r["y"] = to_json(ctx.y());
    r["jacobian_forward"] = to_json(j.fwd);
    r["jacobian_inverse"] = to_json(j.inv);
    r["inverse_hessian"] = to_json(ctx.inverse_hessian());
    r["inverse_hessian_index_order"] = "row-major [component][derivative][derivative], 0-based";
    r["pushed_metric"] = to_json(at_y.g);
    r["pushed_gamma"] = to_json(t.pushed_connection.gamma);
    r["gamma_index_order"] = kIndexOrder3;

    report.check("round_trip_inf", (ctx.map().apply_inverse(ctx.y()) - ctx.x()).cwiseAbs().maxCoeff(),
                 kRoundTripTolerance);
    report.check("jacobian_product_inf", inf_norm(j.fwd * j.inv - Matrix::Identity(n, n)), kJacobianProductTolerance);
    const double gamma_scale = 1.0 + t.pulled_christoffel.gamma.max_abs();
    report.check("connection_commute_inf", t.residual_connection_commute, tol * gamma_scale);
    report.check("connection_forms_inf", (t.pushed_connection.gamma - forward_form.gamma).max_abs(), tol * gamma_scale);
    report.check("metricity_commute_inf", t.residual_metricity_commute, tol * (1.0 + at_y.dg.max_abs()));
    report.check("metric_law_inf", max_abs(push_metric(ctx, at_x.g) - at_y.g), tol * (1.0 + max_abs(at_y.g)));

    if (p.covector) {
        const CovectorPartialResidual c = covector_partial_residual(ctx, *p.covector);
        r["covector_partial_defect"] = to_json(c.defect);
        report.check("covector_partial_inf", c.mismatch, tol * (1.0 + max_abs(c.hessian_term)));
    }
    if (p.covector && p.vector) {
        Point u(n);
        Point v(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            u[i] = (*p.covector)[static_cast<std::size_t>(i)].eval(as_span(ctx.x()));
            v[i] = (*p.vector)[static_cast<std::size_t>(i)].eval(as_span(ctx.x()));
        }
        const Point u_y = push_covector(ctx, u);
        const Point v_y = push_vector(ctx, v);
        const double before = contract_scalar(as_span(u), as_span(v));
        const double after = contract_scalar(as_span(u_y), as_span(v_y));
        r["scalar_x"] = before;
        r["scalar_y"] = after;
        report.check("scalar_invariance", std::abs(after - before), tol * (1.0 + std::abs(before)));
    }
    if (p.scalar) {
        const GradientLawResidual g = gradient_law_residual(ctx, *p.scalar);
        r["gradient_y"] = to_json(g.composed);
        report.check("gradient_law_inf", g.mismatch, tol * (1.0 + g.composed.cwiseAbs().maxCoeff()));
    }
    return finish(report, out, true);
}

ojson sample_json(const SampleAnalysis& a) {
    ojson j;
    j["unknown_count"] = a.unknown_count;
    j["equation_count"] = a.equation_count;
    j["rank"] = a.rank;
    j["nullspace_dim"] = a.nullspace_dim;
    j["sigma_max"] = a.sigma_max;
    j["sigma_min"] = a.sigma_min;
    j["non_generic_dg"] = a.non_generic_dg;
    return j;
}

void sample_residuals(Report& report, const std::string& prefix, const SampleAnalysis& a, double tol) {
    report.check(prefix + "closed_form_constraint", a.closed_form_residual, 1e-10);
    report.check(prefix + "particular_constraint", a.particular_residual, 1e-10);
    report.check(prefix + "nullspace_constraint", a.nullspace_residual, 1e-10);
    report.check(prefix + "nullspace_effective_inf", a.nullspace_effective_max, tol);
    report.check(prefix + "particular_vs_christoffel_inf", a.particular_vs_christoffel, tol);
    report.check(prefix + "closed_form_vs_christoffel_inf", a.closed_form_vs_christoffel, tol);
    report.residual(prefix + "induced_map_spread_inf", a.induced_map_spread);
}

std::vector<std::vector<std::string>> printed_metric(const MetricField& m) {
    std::vector<std::vector<std::string>> out(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i) {
        for (std::size_t j = 0; j < m.dim(); ++j) out[i].push_back(print(m.component(i, j)));
    }
    return out;
}

int cmd_uniqueness(std::optional<std::size_t> dim, std::uint64_t seed, const std::string& file, std::istream& in,
                   double tol, std::ostream& out) {
    Rng rng(seed);
    Report report("uniqueness");
    ojson& inputs = report.inputs();
    inputs["seed"] = seed;

    std::optional<MetricSample> sample;
    if (!file.empty()) {
        const Problem p = load_problem(file, in);
        if (dim && *dim != p.doc.dimension) {
            throw SchemaError("/dimension", "document dimension " + std::to_string(p.doc.dimension) +
                                                " disagrees with --dim " + std::to_string(*dim));
        }
        inputs["document"] = document_digest(p.doc);
        sample = sample_metric(p.metric, p.point);
    } else {
        if (!dim) throw InputError("uniqueness needs --dim or a document");
        if (*dim < 1) throw InputError("--dim must be at least 1");
        const MetricField metric = random_spd_metric(*dim, rng);
        const Point x = random_point(*dim, rng);
        ojson doc;
        doc["dimension"] = *dim;
        doc["metric"] = printed_metric(metric);
        doc["point"] = to_json(x);
        inputs["random_metric"] = doc;
        sample = sample_metric(metric, x);
    }

    UniquenessOptions options;
    options.tolerance = tol;
    const UniquenessReport u = uniqueness_report(*sample, rng, options);

    auto& r = report.results();
    r["dimension"] = sample->dim();
    r["nullspace_dim"] = u.primary.nullspace_dim;
    r["primary"] = sample_json(u.primary);
    r["secondary"] = sample_json(u.secondary);
    ojson lifted;
    lifted["unknown_count"] = u.unrestricted.unknown_count;
    lifted["equation_count"] = u.unrestricted.equation_count;
    lifted["rank"] = u.unrestricted.rank;
    lifted["nullspace_dim"] = u.unrestricted.nullspace_dim;
    r["unrestricted"] = lifted;
    r["random_dg_arrays"] = kRandomDerivativeArrays;

    sample_residuals(report, "", u.primary, tol);
    sample_residuals(report, "secondary_", u.secondary, tol);
    report.check("unrestricted_nullspace_effective_inf", u.unrestricted.nullspace_effective_max, tol);
    report.check("unrestricted_particular_vs_christoffel_inf", u.unrestricted.particular_vs_christoffel, tol);

    Verdict verdict = u.verdict;
    if (!report.all_checks_pass()) verdict = Verdict::Fail;
    report.set_verdict(to_string(verdict));
    report.write(out);
    return verdict == Verdict::Fail ? kVerdictFail : kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err,
        const Environment& env) {
    CLI::App app{"Christoffel symbols, transformation laws and coefficient uniqueness checks", "christoffel"};
    app.require_subcommand(1);

    std::string file;
    auto* christoffel_cmd = app.add_subcommand("christoffel", "Christoffel symbols of a metric at a point");
    christoffel_cmd->add_option("file", file, "problem document (- for stdin)")->required();
    auto* metricity_cmd = app.add_subcommand("metricity", "covariant derivative of the metric");
    metricity_cmd->add_option("file", file, "problem document (- for stdin)")->required();
    auto* transform_cmd = app.add_subcommand("transform-check", "transformation-law residuals under a coordinate map");
    transform_cmd->add_option("file", file, "problem document with a map (- for stdin)")->required();
    auto* tensoriality_cmd = app.add_subcommand("tensoriality", "connection commutation under a coordinate map");
    tensoriality_cmd->add_option("file", file, "problem document with a map (- for stdin)")->required();
    auto* uniqueness_cmd = app.add_subcommand("uniqueness", "solve for every connection linear in the metric derivatives");
    std::optional<std::size_t> dim;
    std::uint64_t seed = 0;
    uniqueness_cmd->add_option("--dim", dim, "dimension of the random metric");
    uniqueness_cmd->add_option("--seed", seed, "64-bit seed for all random draws");
    uniqueness_cmd->add_option("file", file, "optional problem document (- for stdin)");

    std::string command = args.empty() ? "" : args.front();
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        write_error(out, command, "usage", e.what());
        return kInputError;
    }

    try {
        const double tol = parse_tolerance(env);
        if (*christoffel_cmd) return cmd_christoffel(load_problem(file, in), out);
        if (*metricity_cmd) return cmd_metricity(load_problem(file, in), tol, out);
        if (*transform_cmd) return cmd_transform_check(load_problem(file, in), tol, out);
        if (*tensoriality_cmd) return cmd_tensoriality(load_problem(file, in), tol, out);
        if (*uniqueness_cmd) return cmd_uniqueness(dim, seed, file, in, tol, out);
    } catch (const ExpressionError& e) {
        err << e.what() << '\n';
        write_error(out, command, "expression", e.what(), {{"path", e.path()}, {"offset", e.offset()}});
        return kInputError;
    } catch (const SchemaError& e) {
        err << e.what() << '\n';
        write_error(out, command, "schema", e.what(), {{"path", e.path()}});
        return kInputError;
    } catch (const InconsistentSystemError& e) {
        err << e.what() << '\n';
        write_error(out, command, "inconsistent-system", e.what(), {{"verdict", "FAIL"}});
        return kVerdictFail;
    } catch (const GenericityError& e) {
        err << e.what() << '\n';
        write_error(out, command, "genericity", e.what(), {{"verdict", "FAIL"}});
        return kVerdictFail;
    } catch (const DomainError& e) {
        err << e.what() << '\n';
        write_error(out, command, "domain", e.what());
        return kInputError;
    } catch (const SingularMetricError& e) {
        err << e.what() << '\n';
        write_error(out, command, "singular-metric", e.what());
        return kInputError;
    } catch (const SingularMapError& e) {
        err << e.what() << '\n';
        write_error(out, command, "singular-map", e.what());
        return kInputError;
    } catch (const InverseMismatchError& e) {
        err << e.what() << '\n';
        write_error(out, command, "inverse-mismatch", e.what());
        return kInputError;
    } catch (const Error& e) {
        err << e.what() << '\n';
        write_error(out, command, "input", e.what());
        return kInputError;
    }
    write_error(out, command, "usage", "no command given");
    return kInputError;
}

}  // namespace christoffel::cli
