#include "momentflow/compare.hpp"

#include "momentflow/adiabatic.hpp"
#include "momentflow/errors.hpp"
#include "momentflow/output.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace momentflow {

namespace {

FockBasis basis_for(const ClassicalHamiltonian& H, int D, double hbar) {
    return FockBasis{D, H.m, H.omega > 0.0 ? H.omega : 1.0, hbar};
}

VariableError error_of(const std::string& name, const std::vector<double>& a, const std::vector<double>& b) {
    VariableError e;
    e.name = name;
    const std::size_t n = std::min(a.size(), b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::abs(a[i] - b[i]);
        e.max = std::max(e.max, d);
        s += d * d;
    }
    e.rms = n ? std::sqrt(s / n) : 0.0;
    return e;
}

std::vector<double> oracle_column(const OracleTrajectory& o, const std::string& name) {
    std::vector<double> out;
    for (const auto& s : o.states) {
        if (name == "q") {
            out.push_back(s.x[0]);
        } else if (name == "p") {
            out.push_back(s.x[1]);
        } else {
            int a = 0, n = 0;
            if (std::sscanf(name.c_str(), "G_%d_%d", &a, &n) != 2) throw InternalError("bad column " + name);
            out.push_back(s.get(a, n));
        }
    }
    return out;
}

nlohmann::json error_json(const VariableError& e) { return {{"max", e.max}, {"rms", e.rms}}; }

}  // namespace

OracleTrajectory oracle_trajectory(const ClassicalHamiltonian& H, const WaveVector& psi0,
                                   const std::vector<double>& times, int n) {
    const FockOperator Hm = hamiltonian_matrix(H, psi0.basis);
    const Propagator U(Hm);
    OracleTrajectory o;
    o.t = times;
    const double t0 = times.empty() ? 0.0 : times.front();
    for (double t : times) {
        WaveVector w = psi0;
        w.psi = U.evolve(psi0.psi, t - t0);
        o.max_tail = std::max(o.max_tail, tail_weight(w.psi));
        o.states.push_back(moments_of(w, n));
    }
    return o;
}

WaveVector oracle_initial_state(const RunConfig& c) {
    const ClassicalHamiltonian H = c.hamiltonian();
    const FockBasis b = basis_for(H, c.oracle.D, c.params.hbar);
    const auto& I = c.initial;
    // The free particle uses the reference oscillator omega = 1, as initial_state does.
    if (I.type == "coherent") return coherent_at(I.q, I.p, b);
    if (I.type == "squeezed") {
        const double mw = b.m * b.omega;
        Eigen::Matrix2d g;
        g << I.g[0] * mw, I.g[1], I.g[1], I.g[2] / mw;
        return squeezed(g, Eigen::Vector2d(I.q, I.p), b);
    }
    throw ConfigError("field 'initial.type' must be coherent or squeezed for oracle comparisons");
}

Trajectory classical_trajectory(const ClassicalHamiltonian& H, double q0, double p0, const std::vector<double>& times,
                                const IntegratorOptions& opt) {
    auto f = [&](const std::vector<double>& y, std::vector<double>& dy, double) {
        const double s = H.symplectic_scale();
        dy = {s * H.derivative(0, 1, y[0], y[1]), -s * H.derivative(1, 0, y[0], y[1])};
    };
    OdeSolution sol = solve_ode(f, {q0, p0}, times, opt);
    if (!sol.complete) throw Error(static_cast<ErrorKind>(sol.error_code), sol.error);
    Trajectory tr;
    tr.names = {H.kind == ClassicalHamiltonian::Kind::Cosmology ? "c" : "q", "p"};
    tr.t = sol.t;
    tr.stats = sol.stats;
    for (auto& y : sol.y) {
        SemiclassicalState s;
        s.x = y;
        s.n_max = 2;
        tr.states.push_back(s);
    }
    return tr;
}

const VariableError& CompareReport::get(const std::string& name) const {
    for (const auto& e : moments)
        if (e.name == name) return e;
    throw ConfigError("no compared variable '" + name + "'");
}

nlohmann::json CompareReport::to_json() const {
    nlohmann::json j;
    j["model"] = model;
    nlohmann::json m = nlohmann::json::object();
    for (const auto& e : moments) m[e.name] = error_json(e);
    j["moments"] = m;
    if (has_adiabatic) {
        j["adiabatic"] = {{"q", error_json(adiabatic_q)},
                          {"classical_q", error_json(classical_q)},
                          {"improvement_ratio", improvement_ratio}};
    }
    j["warnings"] = warnings;
    return j;
}

std::string CompareReport::table() const {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << "model " << model << "\n";
    os << "variable max_error rms_error\n";
    for (const auto& e : moments) os << e.name << ' ' << format_double(e.max) << ' ' << format_double(e.rms) << '\n';
    if (has_adiabatic) {
        os << "adiabatic_q " << format_double(adiabatic_q.max) << ' ' << format_double(adiabatic_q.rms) << '\n';
        os << "classical_q " << format_double(classical_q.max) << ' ' << format_double(classical_q.rms) << '\n';
        os << "improvement_ratio " << format_double(improvement_ratio) << '\n';
    }
    for (const auto& w : warnings) os << "warning: " << w << '\n';
    return os.str();
}

CompareReport run_compare(const RunConfig& c) {
    c.validate();
    if (c.model == "cosmology") throw ConfigError("field 'model': cosmology is outside oracle coverage");
    const ClassicalHamiltonian H = c.hamiltonian();
    const auto times = time_grid(c.time.t0, c.time.t1, c.time.samples);
    const int n_cmp = std::min(c.n_max, 4);

    CompareReport rep;
    rep.model = c.model;
    const std::string cap = capacity_warning(c.oracle.D, n_cmp);
    if (!cap.empty()) rep.warnings.push_back(cap);

    const WaveVector psi0 = oracle_initial_state(c);
    const OracleTrajectory orc = oracle_trajectory(H, psi0, times, n_cmp);
    if (orc.max_tail > 1e-8)
        rep.warnings.push_back("oracle truncation tail reached " + format_double(orc.max_tail) +
                               "; raise the Fock dimension for this time span");

    // The moment system starts from the oracle's own initial moments.
    SemiclassicalState s0 = initial_state(c);
    const SemiclassicalState o0 = orc.states.front();
    s0.x = o0.x;
    for (auto& [idx, v] : s0.moments)
        if (idx.order() <= n_cmp) v = o0.get(idx);
    EomOptions eo;
    eo.n_max = c.n_max;
    eo.closure = c.closure_policy();
    const EquationSystem sys = generate_eom(expand_quantum_hamiltonian(H, c.n_max), eo);
    const Trajectory tr = integrate(sys, s0, times, c.integrator);
    for (const auto& name : tr.names) {
        if (name != "q" && name != "p") {
            int a = 0, n = 0;
            std::sscanf(name.c_str(), "G_%d_%d", &a, &n);
            if (n > n_cmp) continue;
        }
        rep.moments.push_back(error_of(name, tr.column(name), oracle_column(orc, name)));
    }

    if (c.model == "quartic") {
        rep.has_adiabatic = true;
        const auto oq = oracle_column(orc, "q");
        const AdiabaticTrajectory ad =
            solve_effective(c.adiabatic, H, c.params.hbar, o0.x[0], o0.x[1] / H.m, times, c.integrator);
        rep.adiabatic_q = error_of("adiabatic_q", ad.q, oq);
        if (ad.breakdown) rep.warnings.push_back("adiabatic breakdown: " + ad.stop_reason);
        const Trajectory cl = classical_trajectory(H, o0.x[0], o0.x[1], times, c.integrator);
        rep.classical_q = error_of("classical_q", cl.column("q"), oq);
        rep.improvement_ratio = rep.classical_q.max > 0.0 ? rep.adiabatic_q.max / rep.classical_q.max : 0.0;
    }
    return rep;
}

}  // namespace momentflow
