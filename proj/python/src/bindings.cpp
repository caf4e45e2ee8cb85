#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mkdv/direct_scattering.hpp"
#include "mkdv/mkdv_sim.hpp"
#include "mkdv/soliton_engine.hpp"
#include "mkdv/spectral_data.hpp"
#include "mkdv/uniformization.hpp"

namespace py = pybind11;
using namespace mkdv;

namespace {

PotentialSample make_potential(std::vector<double> x, std::vector<double> q, double left, double right) {
    return PotentialSample(std::move(x), std::move(q), left, right);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Inverse scattering and soliton resolution for the defocusing mKdV equation with kink data";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::enum_<PhaseClass>(m, "PhaseClass")
        .value("NoRealPhasePoints", PhaseClass::NoRealPhasePoints)
        .value("FourRealAxisPoints", PhaseClass::FourRealAxisPoints)
        .value("ImaginaryAxisPoints", PhaseClass::ImaginaryAxisPoints);

    m.def("lambda_", &lambda, py::arg("z"));
    m.def("zeta", &zeta, py::arg("z"));
    m.def(
        "theta", [](cplx z, double xi, double t) { return theta(z, {xi, t}); }, py::arg("z"), py::arg("xi"),
        py::arg("t") = 1.0);
    m.def(
        "theta_prime", [](cplx z, double xi, double t) { return theta_prime(z, {xi, t}); }, py::arg("z"),
        py::arg("xi"), py::arg("t") = 1.0);
    m.def("classify_phase_points", &classify_phase_points, py::arg("xi"));
    m.def("stationary_points", &stationary_points, py::arg("xi"));
    m.def("xi0", &xi0, py::arg("xi"));
    m.def(
        "partition_spectrum",
        [](const std::vector<cplx>& zs, double xi) {
            const SpectrumPartition p = partition_spectrum(zs, xi);
            py::dict d;
            d["delta"] = p.delta;
            d["nabla"] = p.nabla;
            d["lambda"] = p.lambda ? py::cast(*p.lambda) : py::none();
            d["xi0"] = p.xi0;
            d["rho"] = p.rho;
            return d;
        },
        py::arg("spectrum"), py::arg("xi"));

    py::class_<PotentialSample>(m, "Potential")
        .def(py::init(&make_potential), py::arg("x"), py::arg("q"), py::arg("left") = -1.0, py::arg("right") = 1.0)
        .def_static(
            "from_function",
            [](const std::function<double(double)>& f, double xmin, double xmax, int n, double left, double right) {
                // sample once so the Python callable is not retained by the library
                return PotentialSample::from_function(f, xmin, xmax, n, left, right, false);
            },
            py::arg("f"), py::arg("xmin"), py::arg("xmax"), py::arg("n"), py::arg("left") = -1.0,
            py::arg("right") = 1.0)
        .def_property_readonly("x", &PotentialSample::x)
        .def_property_readonly("q", &PotentialSample::q)
        .def_property_readonly("decay_margin", &PotentialSample::decay_margin);

    m.def("a_coefficient", [](cplx z, const PotentialSample& p) { return a_coefficient(z, p); }, py::arg("z"),
          py::arg("potential"));
    m.def(
        "scattering_coefficients",
        [](cplx z, const PotentialSample& p) {
            const auto sc = scattering_coefficients(z, p);
            return std::make_pair(sc.a, sc.b);
        },
        py::arg("z"), py::arg("potential"));
    m.def("reflection", [](double z, const PotentialSample& p) { return reflection(z, p); }, py::arg("z"),
          py::arg("potential"));
    m.def("discrete_spectrum", [](const PotentialSample& p) { return find_discrete_spectrum(p); },
          py::arg("potential"));

    py::class_<DiscreteEigen>(m, "DiscreteEigen")
        .def_readonly("z", &DiscreteEigen::z)
        .def_readonly("c", &DiscreteEigen::c)
        .def_readonly("gamma", &DiscreteEigen::gamma);

    py::class_<ScatteringData>(m, "ScatteringData")
        .def_readonly("s", &ScatteringData::s)
        .def_readonly("r", &ScatteringData::r)
        .def_readonly("discrete", &ScatteringData::discrete)
        .def("max_abs_r", &ScatteringData::max_abs_r);
    m.def("scatter", [](const PotentialSample& p) { return compute_scattering_data(p); }, py::arg("potential"));

    py::class_<TraceInputs>(m, "TraceInputs")
        .def_static("from_scattering", [](const ScatteringData& sd) { return TraceInputs::from_scattering(sd); })
        .def_static("reflectionless", [](std::vector<cplx> zs) { return TraceInputs::reflectionless(std::move(zs)); });
    m.def("trace_formula_a", &trace_formula_a, py::arg("z"), py::arg("inputs"));
    m.def("T_function", py::overload_cast<cplx, double, const TraceInputs&>(&T_function), py::arg("z"),
          py::arg("xi"), py::arg("inputs"));
    m.def("modified_connection", &modified_connection, py::arg("c"), py::arg("z"), py::arg("inputs"));
    m.def("phase_shift",
          py::overload_cast<int, const std::vector<cplx>&, const std::vector<cplx>&, const TraceInputs&>(
              &phase_shift_xj),
          py::arg("j"), py::arg("zs"), py::arg("cs"), py::arg("inputs"));

    py::class_<SolitonConfig>(m, "Solitons")
        .def_static("from_polar", &SolitonConfig::from_polar, py::arg("args"), py::arg("c_abs"))
        .def_static("from_spectrum", [](const ScatteringData& sd) { return solitons_from_spectrum(sd.discrete); })
        .def_property_readonly("zeros", &SolitonConfig::zeros)
        .def_property_readonly("norming", &SolitonConfig::norming)
        .def("__len__", &SolitonConfig::size);
    m.def(
        "exact",
        [](const SolitonConfig& cfg, const std::vector<double>& x, double t, int threads) {
            py::gil_scoped_release release;
            return exact_nsoliton(cfg, x, t, threads);
        },
        py::arg("solitons"), py::arg("x"), py::arg("t"), py::arg("threads") = 1);
    m.def("soliton_velocity", &soliton_velocity, py::arg("z"));

    py::class_<AsymptoticPredictor>(m, "Predictor")
        .def(py::init<const SolitonConfig&, const TraceInputs&>(), py::arg("solitons"), py::arg("inputs"))
        .def("__call__", &AsymptoticPredictor::evaluate, py::arg("x"), py::arg("t"), py::arg("threads") = 1)
        .def_static("in_region", &AsymptoticPredictor::in_region, py::arg("x"), py::arg("t"));

    py::class_<FieldSnapshot>(m, "Snapshot")
        .def_readonly("t", &FieldSnapshot::t)
        .def_readonly("x", &FieldSnapshot::x)
        .def_readonly("q", &FieldSnapshot::q)
        .def_property_readonly("residual_norm", [](const FieldSnapshot& s) { return s.diagnostics.residual_norm; })
        .def_property_readonly("boundary_drift", [](const FieldSnapshot& s) { return s.diagnostics.boundary_drift; });
    m.def(
        "simulate",
        [](const PotentialSample& q0, double L, int N, double dt, double t_end, const std::vector<double>& times,
           const std::string& scheme, double core_left, double core_right) {
            SimConfig cfg;
            cfg.L = L;
            cfg.N = N;
            cfg.dt = dt;
            cfg.t_end = t_end;
            cfg.snapshot_times = times;
            cfg.scheme = scheme_from_string(scheme);
            cfg.core_left = core_left;
            cfg.core_right = core_right;
            py::gil_scoped_release release;
            return evolve(q0, cfg);
        },
        py::arg("q0"), py::arg("L"), py::arg("N"), py::arg("dt"), py::arg("t_end"), py::arg("times"),
        py::arg("scheme") = "imex", py::arg("core_left") = 0.0, py::arg("core_right") = 0.0);
}
