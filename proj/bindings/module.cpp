#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hardylip/hardy_ops.hpp"
#include "hardylip/json_io.hpp"
#include "hardylip/kernels.hpp"
#include "hardylip/suite.hpp"

namespace py = pybind11;
using namespace hardylip;

PYBIND11_MODULE(_hardylip, m) {
    m.doc() = "Cauchy kernels, Hardy norms, and Schwarz-Christoffel maps on "
              "Lipschitz graph domains";

    py::register_exception<Error>(m, "HardyError");

    py::enum_<RegionTag>(m, "RegionTag")
        .value("UpperDomain", RegionTag::UpperDomain)
        .value("Boundary", RegionTag::Boundary)
        .value("LowerDomain", RegionTag::LowerDomain);

    py::class_<LipschitzGraph>(m, "LipschitzGraph")
        .def(py::init([](std::vector<std::pair<double, double>> bps, double sl,
                         double sr, double M) {
                 LipschitzGraph g{std::move(bps), sl, sr, M};
                 g.validate();
                 return g;
             }),
             py::arg("breakpoints"), py::arg("tail_slope_left"),
             py::arg("tail_slope_right"), py::arg("M"))
        .def_readonly("breakpoints", &LipschitzGraph::breakpoints)
        .def_readonly("tail_slope_left", &LipschitzGraph::tail_slope_left)
        .def_readonly("tail_slope_right", &LipschitzGraph::tail_slope_right)
        .def_readonly("M", &LipschitzGraph::lipschitz_M)
        .def("a", &LipschitzGraph::a, py::arg("u"))
        .def("point", &LipschitzGraph::point, py::arg("u"));

    m.def("flat_graph", &make_flat_graph);
    m.def("wedge_graph", &make_wedge_graph, py::arg("slope") = 1.0);
    m.def("zigzag_graph", &make_zigzag_graph);
    m.def("w_graph", &make_w_graph);
    m.def("load_graph", &load_graph, py::arg("name_or_path"));

    py::class_<CurvePoint>(m, "CurvePoint")
        .def_readonly("zeta", &CurvePoint::zeta)
        .def_readonly("derivative_left", &CurvePoint::derivative_left)
        .def_readonly("derivative_right", &CurvePoint::derivative_right)
        .def_readonly("arc_density", &CurvePoint::arc_density)
        .def_property_readonly("derivative", [](const CurvePoint& p) -> py::object {
            if (p.derivative) return py::cast(*p.derivative);
            return py::none();
        });

    m.def("eval_curve", &eval_curve, py::arg("graph"), py::arg("u"));
    m.def("classify", &classify, py::arg("graph"), py::arg("w"), py::arg("tol") = 0.0);
    m.def("polygonal_approximation", &polygonal_approximation, py::arg("graph"),
          py::arg("j"), py::arg("max_nodes") = 4'000'000);
    m.def("distance_to_graph", &distance_to_graph, py::arg("graph"), py::arg("w"));

    py::class_<NTCone>(m, "NTCone")
        .def_readonly("vertex_u", &NTCone::vertex_u)
        .def_readonly("tangent_angle_phi0", &NTCone::tangent_angle_phi0)
        .def_readonly("half_angle_phi", &NTCone::half_angle_phi);
    py::class_<ConeQuery>(m, "ConeQuery")
        .def_readonly("inside_cone", &ConeQuery::inside_cone)
        .def_readonly("entry_radius_delta", &ConeQuery::entry_radius_delta);
    m.def("make_cone", &make_cone, py::arg("graph"), py::arg("u0"), py::arg("phi"));
    m.def("cone_contains", &cone_contains, py::arg("cone"), py::arg("graph"),
          py::arg("w"));

    m.def("k_kernel", &k_kernel, py::arg("zeta"), py::arg("zeta0"), py::arg("z"));
    m.def("k_kernel_difference", &k_kernel_difference, py::arg("zeta"),
          py::arg("zeta0"), py::arg("z"));
    m.def("poisson_kernel", &poisson_kernel, py::arg("x"), py::arg("y"));

    py::class_<KernelBoundCertificate>(m, "KernelBoundCertificate")
        .def_readonly("lhs", &KernelBoundCertificate::lhs)
        .def_readonly("rhs", &KernelBoundCertificate::rhs)
        .def_readonly("constant_used", &KernelBoundCertificate::constant_used)
        .def_readonly("pass_", &KernelBoundCertificate::pass);
    m.def("kernel_bound_certificate",
          py::overload_cast<const LipschitzGraph&, double, double, double>(
              &kernel_bound_certificate),
          py::arg("graph"), py::arg("u"), py::arg("u0"), py::arg("tau"));

    py::class_<QuadratureSpec>(m, "QuadratureSpec")
        .def(py::init<>())
        .def_readwrite("truncation_radius", &QuadratureSpec::truncation_radius)
        .def_readwrite("rel_tol", &QuadratureSpec::rel_tol)
        .def_readwrite("abs_tol", &QuadratureSpec::abs_tol)
        .def_readwrite("max_panels", &QuadratureSpec::max_panels)
        .def_readwrite("tail_decay_exponent", &QuadratureSpec::tail_decay_exponent);

    py::class_<IntegralResult>(m, "IntegralResult")
        .def_readonly("value", &IntegralResult::value)
        .def_readonly("error_estimate", &IntegralResult::error_estimate)
        .def_readonly("tail_estimate", &IntegralResult::tail_estimate)
        .def_readonly("panels_used", &IntegralResult::panels_used)
        .def_readonly("converged", &IntegralResult::converged);

    m.def(
        "integrate_curve",
        [](const LipschitzGraph& g, const std::function<Complex(Complex)>& f,
           const QuadratureSpec& spec, double center, bool arc_length) {
            return integrate_curve(g, f, spec, center,
                                   arc_length ? CurveMeasure::ArcLength
                                              : CurveMeasure::ComplexDz);
        },
        py::arg("graph"), py::arg("integrand"), py::arg("spec") = QuadratureSpec{},
        py::arg("center_u") = 0.0, py::arg("arc_length") = false);
    m.def("cauchy_integral", &cauchy_integral, py::arg("graph"),
          py::arg("boundary_fn"), py::arg("w"), py::arg("spec") = QuadratureSpec{},
          py::arg("boundary_tol") = 1e-12);
    m.def("k_transform", &k_transform, py::arg("graph"), py::arg("boundary_fn"),
          py::arg("zeta0"), py::arg("z"), py::arg("spec") = QuadratureSpec{});
    m.def(
        "hardy_norm",
        [](const LipschitzGraph& g, const std::function<Complex(Complex)>& F, double p,
           const std::vector<double>& taus, const QuadratureSpec& spec) {
            const HardyNormEstimate e = hardy_norm(g, F, p, taus, spec);
            return py::make_tuple(e.per_tau, e.sup_estimate);
        },
        py::arg("graph"), py::arg("F"), py::arg("p"), py::arg("tau_grid"),
        py::arg("spec") = QuadratureSpec{});

    py::class_<SchwarzChristoffelMap>(m, "SchwarzChristoffelMap")
        .def_readonly("rotation_gamma", &SchwarzChristoffelMap::rotation_gamma)
        .def_readonly("prevertices", &SchwarzChristoffelMap::prevertices)
        .def_readonly("exponents", &SchwarzChristoffelMap::exponents)
        .def_readonly("base_point", &SchwarzChristoffelMap::base_point)
        .def_readonly("base_value", &SchwarzChristoffelMap::base_value)
        .def_readonly("scale", &SchwarzChristoffelMap::scale)
        .def_readonly("M", &SchwarzChristoffelMap::lipschitz_M);

    m.def(
        "sc_solve",
        [](const LipschitzGraph& g, std::optional<Complex> base_value) {
            ScSolveOptions opt;
            opt.base_value = base_value;
            return sc_solve(g, opt);
        },
        py::arg("graph"), py::arg("base_value") = std::nullopt);
    m.def("sc_map", &sc_map, py::arg("map"), py::arg("z"),
          py::arg("altitude") = std::numeric_limits<double>::quiet_NaN());
    m.def("sc_derivative", &sc_derivative, py::arg("map"), py::arg("z"));
    m.def(
        "invert_map",
        [](const SchwarzChristoffelMap& map, Complex w) {
            const InverseResult r = invert_map(map, w);
            return py::make_tuple(r.z, r.dpsi);
        },
        py::arg("map"), py::arg("w"));
    m.def("map_to_json", [](const SchwarzChristoffelMap& m_) { return map_to_json(m_).dump(2); });

    py::class_<RationalFunction>(m, "RationalFunction")
        .def(py::init([](std::vector<std::tuple<Complex, int, Complex>> terms) {
                 RationalFunction f;
                 for (auto& [pole, order, coeff] : terms)
                     f.terms.push_back(RationalTerm{pole, order, coeff});
                 return f;
             }),
             py::arg("terms"))
        .def("__call__", &RationalFunction::operator());

    m.def(
        "apply_T",
        [](const SchwarzChristoffelMap& map, const RationalFunction& F, double p,
           Complex z) { return apply_T(map, HardyFunction::rational(F), p, z); },
        py::arg("map"), py::arg("F"), py::arg("p"), py::arg("z"));
    m.def(
        "apply_T_inverse",
        [](const SchwarzChristoffelMap& map, const std::function<Complex(Complex)>& f,
           double p, Complex w) {
            return apply_T_inverse(map, HardyFunction::from_function(f), p, w);
        },
        py::arg("map"), py::arg("f"), py::arg("p"), py::arg("w"));

    m.def(
        "run_suite_file",
        [](const std::string& config_path) {
            const SuiteConfig config = SuiteConfig::from_json(load_json_file(config_path));
            const SuiteReport report = run_suite(config);
            return py::make_tuple(report.pass, report.fail, report.error,
                                  report.to_json().dump(2));
        },
        py::arg("config_path"));

    m.attr("__version__") = "0.1.0";
}
