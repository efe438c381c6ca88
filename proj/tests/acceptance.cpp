// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "christoffel/cli.hpp"
#include "christoffel/connection.hpp"
#include "christoffel/error.hpp"
#include "christoffel/random.hpp"
#include "christoffel/transform.hpp"
#include "christoffel/uniqueness.hpp"
#include "support.hpp"

using namespace christoffel;
namespace t = christoffel::testing;

namespace {

struct Result {
    bool pass = true;
    std::string detail;
};

// Tracks the worst observed ratio value / bound; ratio <= 1 passes.
class Worst {
public:
    void observe(double value, double bound) {
        const double ratio = value / bound;
        if (!(ratio <= 1.0)) pass_ = false;  // NaN fails too
        if (ratio > ratio_ || std::isnan(ratio)) {
            ratio_ = ratio;
            value_ = value;
            bound_ = bound;
        }
    }
    bool pass() const { return pass_; }
    std::string describe(const std::string& label) const {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s worst %.3e (bound %.1e)", label.c_str(), value_, bound_);
        return buf;
    }

private:
    bool pass_ = true;
    double ratio_ = -1.0;
    double value_ = 0.0;
    double bound_ = 0.0;
};

std::string join(std::initializer_list<std::string> parts) {
    std::string out;
    for (const auto& p : parts) out += (out.empty() ? "" : "; ") + p;
    return out;
}

MetricField euclidean(std::size_t n, const std::vector<std::string>& names) {
    std::vector<std::vector<std::string>> g(n, std::vector<std::string>(n, "0"));
    for (std::size_t i = 0; i < n; ++i) g[i][i] = "1";
    return parse_metric(g, names);
}

Result metricity() {
    Worst random_metrics;
    Rng rng(1001);
    for (int k = 0; k < 100; ++k) {
        const std::size_t n = 2 + static_cast<std::size_t>(k % 2);
        const auto s = sample_metric(random_spd_metric(n, rng), random_point(n, rng));
        random_metrics.observe(metricity_residual(s).max_abs(), 1e-9 * (1 + s.dg.max_abs()));
    }

    Worst special;
    const std::vector<std::string> xyz{"x", "y", "z"};
    const std::vector<std::string> sphere{"th", "ph"};
    for (std::size_t n : {2u, 3u}) {
        const std::vector<std::string> names(xyz.begin(), xyz.begin() + static_cast<long>(n));
        const auto e = euclidean(n, names);
        for (int k = 0; k < 10; ++k) special.observe(metricity_residual(e, random_point(n, rng, 2.0)).max_abs(), 1e-12);
    }
    const auto polar = parse_metric({{"1", "0"}, {"0", "r^2"}}, t::kPolarNames);
    const auto round = parse_metric({{"1", "0"}, {"0", "sin(th)^2"}}, sphere);
    const auto diag3 = parse_metric({{"exp(x)", "0", "0"}, {"0", "1 + y^2", "0"}, {"0", "0", "2 + sin(x*z)"}}, xyz);
    for (int k = 0; k < 10; ++k) {
        special.observe(metricity_residual(polar, t::point({rng.uniform(0.5, 3), rng.uniform(-3, 3)})).max_abs(), 1e-12);
        special.observe(metricity_residual(round, t::point({rng.uniform(0.3, 2.8), rng.uniform(-3, 3)})).max_abs(), 1e-12);
        special.observe(metricity_residual(diag3, random_point(3, rng)).max_abs(), 1e-12);
    }
    return {random_metrics.pass() && special.pass(),
            join({random_metrics.describe("100 random"), special.describe("Euclidean/diagonal")})};
}

Result known_christoffels() {
    Worst w;
    const auto polar = christoffel::christoffel(sample_metric(parse_metric({{"1", "0"}, {"0", "r^2"}}, t::kPolarNames),
                                                 t::point({2, 0})))
                           .gamma;
    w.observe(std::abs(polar(0, 1, 1) + 2.0), 1e-12);
    w.observe(std::abs(polar(1, 0, 1) - 0.5), 1e-12);
    const std::vector<std::string> sphere{"th", "ph"};
    const auto round = christoffel::christoffel(sample_metric(parse_metric({{"1", "0"}, {"0", "sin(th)^2"}}, sphere),
                                                 t::point({std::numbers::pi / 4, 0})))
                           .gamma;
    w.observe(std::abs(round(0, 1, 1) + 0.5), 1e-12);
    w.observe(std::abs(round(1, 0, 1) - 1.0), 1e-12);
    return {w.pass(), w.describe("|Gamma - hand value|")};
}

Result commutation() {
    Worst polar;
    Rng rng(1003);
    const auto map = t::cartesian_to_polar();
    const std::vector<Point> points{t::point({1, std::sqrt(3.0)}), t::point({2, 0}), t::point({0.3, -1.1}),
                                    t::point({-0.5, 0.8})};
    for (const Point& x : points) {
        const TransformContext ctx(map, x);
        polar.observe(tensoriality_check(ctx, euclidean(2, t::kCartesianNames)).residual_connection_commute, 1e-7);
        polar.observe(tensoriality_check(ctx, random_spd_metric(2, rng)).residual_connection_commute, 1e-7);
    }
    Worst diffeos;
    for (int k = 0; k < 50; ++k) {
        const std::size_t n = 2 + static_cast<std::size_t>(k % 2);
        const TransformContext ctx = random_near_identity_context(n, rng);
        diffeos.observe(tensoriality_check(ctx, random_spd_metric(n, rng)).residual_connection_commute, 1e-7);
    }
    return {polar.pass() && diffeos.pass(),
            join({polar.describe("Cartesian->polar"), diffeos.describe("50 near-identity")})};
}

Result non_tensoriality() {
    Worst random;
    Rng rng(1004);
    const std::vector<std::string> xyz{"x", "y", "z"};
    for (int k = 0; k < 50; ++k) {
        const std::size_t n = 2 + static_cast<std::size_t>(k % 2);
        const std::vector<std::string> names(xyz.begin(), xyz.begin() + static_cast<long>(n));
        const TransformContext ctx = random_near_identity_context(n, rng);
        std::vector<Expression> v;
        for (std::size_t i = 0; i < n; ++i) v.emplace_back(random_quadratic(n, rng), n, names);
        random.observe(covector_partial_residual(ctx, v).mismatch, 1e-8);
    }
    // Affine: the Hessian term vanishes identically; the independently
    // composed defect can only match it to round-off.
    double affine_h = 0.0;
    double affine_d = 0.0;
    const std::vector<std::string> ab{"a", "b"};
    for (int k = 0; k < 10; ++k) {
        const TransformContext ctx(t::affine_2d(), random_point(2, rng));
        std::vector<Expression> v{Expression(random_quadratic(2, rng), 2, ab),
                                  Expression(random_quadratic(2, rng), 2, ab)};
        const auto r = covector_partial_residual(ctx, v);
        affine_h = std::max(affine_h, max_abs(r.hessian_term));
        affine_d = std::max(affine_d, max_abs(r.defect));
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "affine |H.v| %.3e (must be 0), |D| %.3e (round-off bound 1e-14)", affine_h, affine_d);
    return {random.pass() && affine_h == 0.0 && affine_d <= 1e-14, join({random.describe("50 samples |D - H.v|"), buf})};
}

Result scalar_laws() {
    Worst contraction;
    Worst gradient;
    Rng rng(1005);
    const std::vector<std::string> xyz{"x", "y", "z"};
    for (int k = 0; k < 100; ++k) {
        const std::size_t n = 2 + static_cast<std::size_t>(k % 2);
        const std::vector<std::string> names(xyz.begin(), xyz.begin() + static_cast<long>(n));
        const TransformContext ctx = random_near_identity_context(n, rng);
        const Point u = random_point(n, rng, 1.0);
        const Point v = random_point(n, rng, 1.0);
        const double before = contract_scalar(as_span(u), as_span(v));
        const double after = contract_scalar(as_span(push_covector(ctx, u)), as_span(push_vector(ctx, v)));
        contraction.observe(std::abs(after - before), 1e-9);
        gradient.observe(gradient_law_residual(ctx, Expression(random_quadratic(n, rng), n, names)).mismatch, 1e-9);
    }
    return {contraction.pass() && gradient.pass(),
            join({contraction.describe("contraction"), gradient.describe("gradient")})};
}

Result uniqueness() {
    Worst closed_form;
    Worst spread;
    Worst vs_christoffel;
    bool dims_agree = true;
    std::string dims;
    Rng rng(1006);
    for (std::size_t n : {2u, 3u}) {
        const auto s = sample_metric(random_spd_metric(n, rng), random_point(n, rng));
        const auto r = uniqueness_report(s, rng);
        for (const SampleAnalysis* a : {&r.primary, &r.secondary}) {
            closed_form.observe(a->closed_form_residual, 1e-10);
            spread.observe(std::max(a->nullspace_effective_max, a->induced_map_spread), 1e-9);
            vs_christoffel.observe(std::max(a->particular_vs_christoffel, a->closed_form_vs_christoffel), 1e-9);
        }
        spread.observe(r.unrestricted.nullspace_effective_max, 1e-9);
        vs_christoffel.observe(r.unrestricted.particular_vs_christoffel, 1e-9);
        dims_agree = dims_agree && r.primary.nullspace_dim == r.secondary.nullspace_dim &&
                     r.primary.unknown_count == n * n * (n * (n + 1) / 2) * (n * (n + 1) / 2);
        dims += "n=" + std::to_string(n) + ": " + std::to_string(r.primary.unknown_count) + " unknowns, nullspace " +
                std::to_string(r.primary.nullspace_dim) + "/" + std::to_string(r.secondary.nullspace_dim) + " ";
    }
    return {closed_form.pass() && spread.pass() && vs_christoffel.pass() && dims_agree,
            join({closed_form.describe("(a)"), spread.describe("(b)"), vs_christoffel.describe("(c)"), "(d) " + dims})};
}

Result parser_ad() {
    Worst first;
    bool symmetric = true;
    Rng rng(1007);
    const std::vector<std::string> names{"x", "y", "z"};
    for (int k = 0; k < 200; ++k) {
        const Expression e = parse(t::random_expression_text(rng, names, 4), names);
        const Point x = random_point(3, rng, 1.0);
        const auto f = t::as_function(e);
        for (std::size_t i = 0; i < 3; ++i) {
            const double ad = derivative2(e, as_span(x), i, i).d_i;
            const double fd = t::central_difference(f, x, i, 1e-5);
            first.observe(std::abs(ad - fd), 1e-6 * std::max(1.0, std::abs(ad)));
            for (std::size_t j = 0; j < 3; ++j) {
                symmetric = symmetric &&
                            derivative2(e, as_span(x), i, j).d_ij == derivative2(e, as_span(x), j, i).d_ij;
            }
        }
    }
    return {first.pass() && symmetric,
            join({first.describe("200 expressions"), symmetric ? "mixed partials exact" : "mixed partials differ"})};
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

Result cli_contract() {
    const std::string examples = CHRISTOFFEL_EXAMPLES_DIR;
    const std::string golden = CHRISTOFFEL_GOLDEN_DIR;
    struct Case {
        std::vector<std::string> args;
        std::string golden;
        std::string stdin_text;
        std::optional<std::string> tol;
        int code;
    };
    const std::vector<Case> cases{
        {{"metricity", examples + "/euclidean.json"}, golden + "/euclidean_metricity.json", "", {}, 0},
        {{"christoffel", examples + "/polar.json"}, golden + "/polar_christoffel.json", "", {}, 0},
        {{"uniqueness", "--dim", "2", "--seed", "7"}, golden + "/uniqueness_dim2_seed7.json", "", {}, 0},
        // Verdict failure under an impossible tolerance.
        {{"tensoriality", examples + "/cartesian_to_polar.json"}, "", "", "1e-300", 1},
        // Input errors.
        {{"christoffel", "-"}, "", R"j({"dimension": 1, "coordinates": ["r"], "metric": [["r +"]], "point": [1]})j", {}, 2},
        {{"christoffel", "-"}, "", "not json", {}, 2},
        {{"metricity", "-"}, "", R"j({"dimension": 1, "coordinates": ["r"], "metric": [["r"]], "point": [0]})j", {}, 2},
        {{"tensoriality", examples + "/polar.json"}, "", "", {}, 2},
        {{"no-such-command"}, "", "", {}, 2},
    };
    int matched = 0;
    std::string failures;
    for (const auto& c : cases) {
        std::istringstream in(c.stdin_text);
        std::ostringstream out;
        std::ostringstream err;
        cli::Environment env;
        env.tolerance = c.tol;
        const int code = cli::run(c.args, in, out, err, env);
        bool ok = code == c.code;
        if (!c.golden.empty()) ok = ok && out.str() == read_file(c.golden);
        if (ok) {
            ++matched;
        } else {
            failures += " [" + c.args.front() + " exit " + std::to_string(code) + "]";
        }
    }
    return {matched == static_cast<int>(cases.size()),
            "3 golden reports + 6 exit-code cases: " + std::to_string(matched) + "/" + std::to_string(cases.size()) +
                " match" + failures};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
        {"metricity", metricity},
        {"known Christoffel symbols", known_christoffels},
        {"transformation commutation", commutation},
        {"non-tensoriality residual", non_tensoriality},
        {"scalar and gradient laws", scalar_laws},
        {"uniqueness", uniqueness},
        {"parser and AD", parser_ad},
        {"CLI golden files and exit codes", cli_contract},
    };
    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Result r;
        try {
            r = criteria[i].second();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        all = all && r.pass;
        std::printf("AC%zu %s %s: %s (%.2fs)\n", i + 1, r.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    r.detail.c_str(), secs);
    }
    return all ? 0 : 1;
}
