#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "christoffel/chart.hpp"
#include "christoffel/cli.hpp"
#include "christoffel/connection.hpp"
#include "christoffel/error.hpp"
#include "christoffel/random.hpp"
#include "christoffel/transform.hpp"
#include "christoffel/uniqueness.hpp"

namespace py = pybind11;
using namespace christoffel;

namespace {

py::array_t<double> to_array(const Tensor3& t) {
    const auto n = static_cast<py::ssize_t>(t.dim());
    py::array_t<double> out({n, n, n});
    std::copy(t.flat().begin(), t.flat().end(), out.mutable_data());
    return out;
}

py::dict analysis_dict(const SampleAnalysis& a) {
    py::dict d;
    d["unknown_count"] = a.unknown_count;
    d["equation_count"] = a.equation_count;
    d["rank"] = a.rank;
    d["nullspace_dim"] = a.nullspace_dim;
    d["closed_form_residual"] = a.closed_form_residual;
    d["particular_residual"] = a.particular_residual;
    d["nullspace_effective_max"] = a.nullspace_effective_max;
    d["particular_vs_christoffel"] = a.particular_vs_christoffel;
    d["closed_form_vs_christoffel"] = a.closed_form_vs_christoffel;
    d["induced_map_spread"] = a.induced_map_spread;
    d["non_generic_dg"] = a.non_generic_dg;
    return d;
}

py::dict report_dict(const UniquenessReport& r) {
    py::dict d;
    d["verdict"] = std::string(to_string(r.verdict));
    d["primary"] = analysis_dict(r.primary);
    d["secondary"] = analysis_dict(r.secondary);
    py::dict u;
    u["unknown_count"] = r.unrestricted.unknown_count;
    u["rank"] = r.unrestricted.rank;
    u["nullspace_dim"] = r.unrestricted.nullspace_dim;
    u["nullspace_effective_max"] = r.unrestricted.nullspace_effective_max;
    d["unrestricted"] = u;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Christoffel symbols, coordinate transformation laws and connection uniqueness checks";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    auto parse_error = py::register_exception<ParseError>(m, "ParseError", error.ptr());
    py::register_exception<UnknownIdentifierError>(m, "UnknownIdentifierError", parse_error.ptr());
    py::register_exception<DomainError>(m, "DomainError", error.ptr());
    py::register_exception<SingularMapError>(m, "SingularMapError", error.ptr());
    py::register_exception<InverseMismatchError>(m, "InverseMismatchError", error.ptr());
    py::register_exception<SingularMetricError>(m, "SingularMetricError", error.ptr());
    py::register_exception<AsymmetricMetricError>(m, "AsymmetricMetricError", error.ptr());
    py::register_exception<ShapeError>(m, "ShapeError", error.ptr());
    py::register_exception<InconsistentSystemError>(m, "InconsistentSystemError", error.ptr());
    py::register_exception<GenericityError>(m, "GenericityError", error.ptr());

    py::class_<Expression>(m, "Expression")
        .def_property_readonly("n_vars", &Expression::n_vars)
        .def_property_readonly("names", &Expression::names)
        .def("__call__", [](const Expression& e, std::vector<double> x) { return e.eval(x); }, py::arg("point"))
        .def(
            "derivative2",
            [](const Expression& e, std::vector<double> x, std::size_t i, std::size_t j) {
                const auto d = derivative2(e, x, i, j);
                return py::make_tuple(d.value, d.d_i, d.d_j, d.d_ij);
            },
            py::arg("point"), py::arg("i"), py::arg("j"),
            "(value, d_i, d_j, d_ij) at a point; indices are 0-based.")
        .def("gradient", [](const Expression& e, std::vector<double> x) { return gradient(e, x); }, py::arg("point"))
        .def("__eq__", [](const Expression& a, const Expression& b) { return a == b; })
        .def("__str__", [](const Expression& e) { return print(e); })
        .def("__repr__", [](const Expression& e) { return "Expression('" + print(e) + "')"; });

    m.def(
        "parse", [](const std::string& text, const std::vector<std::string>& names) { return parse(text, names); },
        py::arg("text"), py::arg("variables"));

    py::class_<MetricField>(m, "MetricField").def_property_readonly("dim", &MetricField::dim);
    m.def(
        "parse_metric",
        [](const std::vector<std::vector<std::string>>& g, const std::vector<std::string>& names) {
            return parse_metric(g, names);
        },
        py::arg("components"), py::arg("coordinates"));
    m.def(
        "random_spd_metric",
        [](std::size_t n, std::uint64_t seed) {
            Rng rng(seed);
            return random_spd_metric(n, rng);
        },
        py::arg("n"), py::arg("seed"));

    py::class_<MetricSample>(m, "MetricSample")
        .def_readonly("x", &MetricSample::x)
        .def_readonly("g", &MetricSample::g)
        .def_readonly("g_inv", &MetricSample::g_inv)
        .def_property_readonly("dg", [](const MetricSample& s) { return to_array(s.dg); });
    m.def("sample_metric", &sample_metric, py::arg("metric"), py::arg("point"));

    m.def(
        "christoffel", [](const MetricSample& s) { return to_array(christoffel::christoffel(s).gamma); },
        py::arg("sample"), "Gamma[l, m, n], upper index first.");
    m.def(
        "metricity_residual", [](const MetricSample& s) { return to_array(metricity_residual(s)); },
        py::arg("sample"));

    py::class_<CoordinateMap>(m, "CoordinateMap")
        .def(py::init(&CoordinateMap::parse), py::arg("x_names"), py::arg("y_names"), py::arg("forward"),
             py::arg("inverse"))
        .def_static("identity", &CoordinateMap::identity, py::arg("n"))
        .def_property_readonly("dim", &CoordinateMap::dim)
        .def("apply", &CoordinateMap::apply, py::arg("x"))
        .def("apply_inverse", &CoordinateMap::apply_inverse, py::arg("y"))
        .def("round_trip_error", &CoordinateMap::round_trip_error, py::arg("x"));

    py::class_<TransformContext>(m, "TransformContext")
        .def(py::init<CoordinateMap, Point>(), py::arg("map"), py::arg("x"))
        .def_property_readonly("x", &TransformContext::x)
        .def_property_readonly("y", &TransformContext::y)
        .def_property_readonly("jacobian", [](const TransformContext& c) { return c.jacobians().fwd; })
        .def_property_readonly("inverse_jacobian", [](const TransformContext& c) { return c.jacobians().inv; })
        .def_property_readonly("inverse_hessian", [](const TransformContext& c) { return to_array(c.inverse_hessian()); })
        .def("push_vector", &push_vector, py::arg("v"))
        .def("push_covector", &push_covector, py::arg("v"))
        .def("push_metric", &push_metric, py::arg("g"))
        .def(
            "tensoriality",
            [](const TransformContext& c, const MetricField& metric) {
                const auto r = tensoriality_check(c, metric);
                py::dict d;
                d["pushed_connection"] = to_array(r.pushed_connection.gamma);
                d["pulled_christoffel"] = to_array(r.pulled_christoffel.gamma);
                d["residual_connection_commute"] = r.residual_connection_commute;
                d["residual_metricity_commute"] = r.residual_metricity_commute;
                return d;
            },
            py::arg("metric"));

    m.def(
        "uniqueness_report",
        [](std::size_t n, std::uint64_t seed) {
            Rng rng(seed);
            const MetricField metric = random_spd_metric(n, rng);
            const Point x = random_point(n, rng);
            return report_dict(uniqueness_report(metric, x, rng));
        },
        py::arg("n"), py::arg("seed") = 0,
        "Uniqueness analysis at a seeded random metric; same draws as the command line tool.");

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args, const std::string& stdin_text) {
            std::istringstream in(stdin_text);
            std::ostringstream out;
            std::ostringstream err;
            const int code = cli::run(args, in, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), py::arg("stdin") = "", "Runs one command in-process: (exit_code, stdout, stderr).");

    m.attr("__version__") = std::string(cli::kToolVersion);
}
