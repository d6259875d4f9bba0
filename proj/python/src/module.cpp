#include "rabiheat/approx.hpp"
#include "rabiheat/config.hpp"
#include "rabiheat/report.hpp"
#include "rabiheat/transport.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace rabiheat;

namespace
{

BathPair make_baths(double alpha_left, double alpha_right, double t_left, double t_right, double omega_c)
{
    BathPair b;
    b.left.alpha = alpha_left;
    b.right.alpha = alpha_right;
    b.left.temperature = t_left;
    b.right.temperature = t_right;
    b.left.omega_c = b.right.omega_c = omega_c;
    b.validate();
    return b;
}

std::string run_to_json(const std::string& config_text, std::size_t threads)
{
    const RunConfig cfg = parse_config_text(config_text);
    const RunReport rep = run(cfg, threads);
    std::ostringstream out;
    emit_json(out, cfg, rep);
    return out.str();
}

} // namespace

PYBIND11_MODULE(_rabiheat, m)
{
    m.doc() = "Heat transport through a qubit-resonator junction";
    m.attr("__version__") = version();

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<SingularSystemError>(m, "SingularSystemError", PyExc_RuntimeError);
    py::register_exception<DegenerateCutoffError>(m, "DegenerateCutoffError", PyExc_ValueError);

    py::enum_<BathSide>(m, "BathSide").value("left", BathSide::left).value("right", BathSide::right);
    py::enum_<SolverMode>(m, "SolverMode").value("fsme", SolverMode::fsme).value("psme", SolverMode::psme);
    py::enum_<Renormalization>(m, "Renormalization")
        .value("auto", Renormalization::automatic)
        .value("on", Renormalization::on)
        .value("off", Renormalization::off);

    py::class_<JunctionParams>(m, "JunctionParams")
        .def(py::init([](double delta, double epsilon, double g, double omega_r) {
                 JunctionParams p{delta, epsilon, omega_r, g};
                 p.validate();
                 return p;
             }),
             py::arg("delta") = 1.0, py::arg("epsilon") = 0.0, py::arg("g") = 0.01, py::arg("omega_r") = 1.0)
        .def_readwrite("delta", &JunctionParams::delta)
        .def_readwrite("epsilon", &JunctionParams::epsilon)
        .def_readwrite("g", &JunctionParams::g)
        .def_readwrite("omega_r", &JunctionParams::omega_r)
        .def_property_readonly("omega_q", &JunctionParams::omega_q);

    py::class_<EigenSystem>(m, "EigenSystem")
        .def_readonly("omega", &EigenSystem::omega)
        .def_readonly("q_left", &EigenSystem::q_left)
        .def_readonly("q_right", &EigenSystem::q_right)
        .def("bohr", &EigenSystem::bohr);

    m.def(
        "solve_junction",
        [](const JunctionParams& p, std::size_t n_fock, std::size_t n_levels) {
            return solve_junction(p, TruncationConfig{n_fock, n_levels});
        },
        py::arg("params"), py::arg("n_fock") = 20, py::arg("n_levels") = 5,
        "Eigenfrequencies and bath coupling operators in the energy eigenbasis.");

    m.def(
        "w_function",
        [](double omega, double alpha, double temperature, double omega_c) {
            BathSpec b{BathSide::left, alpha, temperature, omega_c};
            b.validate();
            return w_function(omega, b);
        },
        py::arg("omega"), py::arg("alpha"), py::arg("temperature"), py::arg("omega_c") = 5.0);

    m.def(
        "power_spectrum",
        [](double omega, double alpha, double temperature, double omega_c) {
            BathSpec b{BathSide::left, alpha, temperature, omega_c};
            b.validate();
            return power_spectrum(omega, b);
        },
        py::arg("omega"), py::arg("alpha"), py::arg("temperature"), py::arg("omega_c") = 5.0);

    py::class_<TransportResult>(m, "TransportResult")
        .def_readonly("i_forward", &TransportResult::i_forward)
        .def_readonly("i_backward", &TransportResult::i_backward)
        .def_readonly("i_forward_raw", &TransportResult::i_forward_raw)
        .def_readonly("i_backward_raw", &TransportResult::i_backward_raw)
        .def_readonly("rectification", &TransportResult::rectification)
        .def_readonly("conductance", &TransportResult::conductance)
        .def_readonly("conductance_raw", &TransportResult::conductance_raw)
        .def_readonly("min_population", &TransportResult::min_population)
        .def_readonly("positivity_ok", &TransportResult::positivity_ok)
        .def_readonly("truncation_converged", &TransportResult::truncation_converged);

    m.def(
        "evaluate_point",
        [](const JunctionParams& p, double alpha, double temperature, double delta_t, const std::string& mode,
           double omega_c, std::size_t n_fock, std::size_t n_levels, double coherence_threshold,
           Renormalization renormalization, double eta, bool conductance, bool check_truncation) {
            ModelConfig model;
            model.junction = p;
            model.baths.left.alpha = model.baths.right.alpha = alpha;
            model.baths.left.omega_c = model.baths.right.omega_c = omega_c;
            model.truncation = {n_fock, n_levels};
            if (mode != "fsme" && mode != "psme") throw py::value_error("mode must be 'fsme' or 'psme'");
            model.mode = mode == "psme" ? SolverMode::psme : SolverMode::fsme;
            model.coherence_threshold = coherence_threshold;
            model.renormalization = renormalization;
            PointSettings s;
            s.temperature = temperature;
            s.delta_t = delta_t;
            s.eta = eta;
            s.with_conductance = conductance;
            s.check_truncation = check_truncation;
            py::gil_scoped_release release;
            return evaluate_point(model, s);
        },
        py::arg("params"), py::arg("alpha") = 1e-3, py::arg("temperature") = 0.25, py::arg("delta_t") = 0.1,
        py::arg("mode") = "fsme", py::arg("omega_c") = 5.0, py::arg("n_fock") = 20, py::arg("n_levels") = 5,
        py::arg("coherence_threshold") = 0.1, py::arg("renormalization") = Renormalization::automatic,
        py::arg("eta") = 1e-5, py::arg("conductance") = false, py::arg("check_truncation") = false,
        "Forward/backward currents and rectification at one parameter point.");

    m.def("rectification", &rectification, py::arg("i_forward"), py::arg("i_backward"), py::arg("eta"));

    m.def(
        "run_config",
        [](const std::string& text, std::size_t threads) {
            std::string out;
            {
                py::gil_scoped_release release;
                out = run_to_json(text, threads);
            }
            return out;
        },
        py::arg("config_json"), py::arg("threads") = 1,
        "Runs a JSON configuration and returns the JSON report as text.");
    m.def("preset_config", [](const std::string& name) { return to_json(preset(name)).dump(); }, py::arg("name"));
    m.def("preset_names", &preset_names);

    m.def(
        "tls_current",
        [](double omega10, double gamma_left, double gamma_right, double t_left, double t_right) {
            return tls_current(omega10, gamma_left, gamma_right, t_left, t_right).value;
        },
        py::arg("omega10"), py::arg("gamma_left"), py::arg("gamma_right"), py::arg("t_left"), py::arg("t_right"));
    m.def("tls_chi", &tls_chi, py::arg("q_left_01"), py::arg("q_right_01"));
    m.def("tls_rectification", &tls_rectification, py::arg("chi"), py::arg("omega10"), py::arg("t_left"),
          py::arg("t_right"));
    m.def("gstar_estimate", &gstar_estimate, py::arg("delta"), py::arg("omega_r") = 1.0);
    m.def(
        "grwa_tls_elements",
        [](const JunctionParams& p) {
            const auto e = grwa_tls_elements(p);
            return py::make_tuple(e.q_left_01, e.q_right_01);
        },
        py::arg("params"));
    m.def(
        "jc_levels", [](const JunctionParams& p, std::size_t n_max) { return jc_spectrum_and_elements(p, n_max).levels(); },
        py::arg("params"), py::arg("n_max") = 2);
    m.def(
        "three_level_analytic",
        [](const JunctionParams& p, double alpha, double t_left, double t_right, double omega_c, bool use_high_t_w) {
            const auto r = three_level_analytic(p, make_baths(alpha, alpha, t_left, t_right, omega_c), use_high_t_w);
            py::dict d;
            d["current"] = r.current;
            d["populations"] = r.state.populations;
            d["rho_12"] = r.state.coherences.at(0);
            d["warnings"] = r.warnings;
            return d;
        },
        py::arg("params"), py::arg("alpha"), py::arg("t_left"), py::arg("t_right"), py::arg("omega_c") = 5.0,
        py::arg("use_high_t_w") = true);
}
