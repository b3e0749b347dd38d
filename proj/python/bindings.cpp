// Python extension: run configurations go in and results come out as JSON
// text; the package wrapper converts to and from Python objects.

#include "momentflow/compare.hpp"
#include "momentflow/config.hpp"
#include "momentflow/dynamics.hpp"
#include "momentflow/errors.hpp"
#include "momentflow/moment_algebra.hpp"
#include "momentflow/order_check.hpp"
#include "momentflow/output.hpp"
#include "momentflow/states.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <map>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace momentflow;
using nlohmann::json;

namespace {

RunConfig parse(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("configuration is not valid JSON: ") + e.what());
    }
    return config_from_json(j);
}

std::string simulate(const std::string& text) {
    const RunConfig c = parse(text);
    EomOptions eo;
    eo.n_max = c.n_max;
    eo.closure = c.closure_policy();
    const EquationSystem sys = generate_eom(expand_quantum_hamiltonian(c.hamiltonian(), c.n_max), eo);
    const Trajectory tr =
        integrate(sys, initial_state(c), time_grid(c.time.t0, c.time.t1, c.time.samples), c.integrator, true);
    json out = metadata("simulate", config_to_json(c));
    out["trajectory"] = trajectory_json(tr);
    if (!tr.complete) out["error_code"] = tr.error_code;
    return out.dump();
}

std::string compare(const std::string& text) { return run_compare(parse(text)).to_json().dump(); }

std::string order_check_json(const std::string& text) {
    const RunConfig c = parse(text);
    const OrderCheckResult r = order_check(c.hamiltonian(), c.order_check_options());
    json j{{"hbars", r.hbars}, {"mismatch", r.mismatch}, {"exact", r.exact}, {"passed", r.passed}, {"verdict", r.verdict}};
    if (!r.exact) j["slope"] = r.slope;
    return j.dump();
}

std::string bracket(int a1, int n1, int a2, int n2) {
    return bracket_moments(MomentIndex::single(a1, n1), MomentIndex::single(a2, n2)).str();
}

std::map<std::string, double> state_moments(const SemiclassicalState& s) {
    std::map<std::string, double> out;
    for (const auto& [i, v] : s.moments) out[moment_column(i.a(), i.order())] = v;
    return out;
}

std::map<std::string, double> squeezed_state(const std::array<double, 3>& g, double q, double p, int n_max, double hbar) {
    Eigen::Matrix2d m;
    m << g[0], g[1], g[1], g[2];
    return state_moments(squeezed_moments(SqueezeMatrix(m), Eigen::Vector2d(q, p), n_max, hbar));
}

double margin(double G02, double G12, double G22, double hbar) {
    SemiclassicalState s;
    s.hbar = hbar;
    s.x = {0.0, 0.0};
    s.set(0, 2, G02);
    s.set(1, 2, G12);
    s.set(2, 2, G22);
    return check_uncertainty_order2(s);
}

}  // namespace

PYBIND11_MODULE(_momentflow, m) {
    m.doc() = "Moment dynamics of semiclassical states";

    // Translators run newest first, so the base class is registered first.
    const auto base = py::register_exception<Error>(m, "MomentflowError");
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());

    m.def("version", &version);
    m.def("simulate_json", &simulate, py::arg("config"));
    m.def("compare_json", &compare, py::arg("config"));
    m.def("order_check_json", &order_check_json, py::arg("config"));
    m.def("bracket", &bracket, py::arg("a1"), py::arg("n1"), py::arg("a2"), py::arg("n2"));
    m.def("squeezed_moments", &squeezed_state, py::arg("g"), py::arg("q"), py::arg("p"), py::arg("n_max"),
          py::arg("hbar") = 1.0);
    m.def(
        "coherent_moments",
        [](double q, double p, double hbar, double mass, double omega, int n_max) {
            return state_moments(coherent_state(q, p, hbar, mass, omega, n_max));
        },
        py::arg("q"), py::arg("p"), py::arg("hbar") = 1.0, py::arg("m") = 1.0, py::arg("omega") = 1.0,
        py::arg("n_max") = 2);
    m.def("uncertainty_margin", &margin, py::arg("G02"), py::arg("G12"), py::arg("G22"), py::arg("hbar") = 1.0);
}
