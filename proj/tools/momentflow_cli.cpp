// momentflow command-line tool.

#include "momentflow/adiabatic.hpp"
#include "momentflow/compare.hpp"
#include "momentflow/config.hpp"
#include "momentflow/dynamics.hpp"
#include "momentflow/errors.hpp"
#include "momentflow/moment_algebra.hpp"
#include "momentflow/order_check.hpp"
#include "momentflow/output.hpp"
#include "momentflow/uncertainty.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

using namespace momentflow;
using nlohmann::json;

namespace {

struct Flags {
    std::string config;
    std::optional<std::string> model;
    std::optional<std::string> out;
    std::optional<double> hbar;
    std::optional<int> nmax;
    std::optional<int> oracle_dim;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> format;
    // brackets
    int dof = 1;
    // uncertainty
    std::string state;
};

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "JSON run configuration");
    sub->add_option("--model", f.model, "harmonic, free, quartic or cosmology");
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--hbar", f.hbar, "Planck constant");
    sub->add_option("--nmax", f.nmax, "retained moment order");
    sub->add_option("--oracle-dim", f.oracle_dim, "Fock dimension of the oracle");
    sub->add_option("--seed", f.seed, "random seed");
    sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

RunConfig resolve(const Flags& f) {
    json j = json::object();
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) throw ConfigError("cannot open config file '" + f.config + "'");
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw ConfigError("config file '" + f.config + "' is not valid JSON: " + e.what());
        }
    }
    // Flags win over the file.
    if (f.model) j["model"] = *f.model;
    if (f.hbar) j["params"]["hbar"] = *f.hbar;
    if (f.nmax) j["n_max"] = *f.nmax;
    if (f.oracle_dim) j["oracle"]["D"] = *f.oracle_dim;
    if (f.seed) j["seed"] = *f.seed;
    if (f.out) j["output"]["dir"] = *f.out;
    if (f.format) j["output"]["format"] = *f.format;
    // Cosmology without an initial state: the small-correction choice g_{3/2} = 0, g_3 = 1.
    if (j.value("model", std::string()) == "cosmology" && !j.contains("initial")) {
        j["initial"] = {{"type", "cosmology"}, {"p", 1000.0}, {"suitable_g0", true}};
        if (!j.contains("params") || !j["params"].contains("g3")) j["params"]["g3"] = 1.0;
    }
    return config_from_json(j);
}

std::string out_path(const RunConfig& c, const std::string& suffix) {
    std::filesystem::create_directories(c.output.dir);
    return (std::filesystem::path(c.output.dir) / (c.output.prefix + suffix)).string();
}

std::string csv_with_header(const RunConfig& c, const std::string& command, const std::vector<std::string>& names,
                            const std::vector<double>& t, const std::vector<std::vector<double>>& rows) {
    std::ostringstream os;
    os << "# momentflow " << version() << " " << command << "\n";
    os << "# config " << config_to_json(c).dump() << "\n";
    write_csv(os, names, t, rows);
    return os.str();
}

int cmd_simulate(const Flags& f) {
    const RunConfig c = resolve(f);
    const ClassicalHamiltonian H = c.hamiltonian();
    EomOptions eo;
    eo.n_max = c.n_max;
    eo.closure = c.closure_policy();
    const EquationSystem sys = generate_eom(expand_quantum_hamiltonian(H, c.n_max), eo);
    const SemiclassicalState s0 = initial_state(c);
    const Trajectory tr = integrate(sys, s0, time_grid(c.time.t0, c.time.t1, c.time.samples), c.integrator, true);

    json meta = metadata("simulate", config_to_json(c));
    meta["hamiltonian"] = H.name();
    meta["closure"] = c.closure;
    meta["hbar"] = c.params.hbar;
    meta["complete"] = tr.complete;
    meta["stop_reason"] = tr.stop_reason;
    meta["stop_time"] = tr.stop_time;
    meta["stats"] = stats_json(tr.stats);
    if (c.output.format == "csv") {
        const std::string p = out_path(c, ".csv");
        write_file(p, csv_with_header(c, "simulate", tr.names, tr.t, trajectory_rows(tr)));
        write_file(out_path(c, ".json"), dump_json(meta));
        std::cout << "wrote " << p << "\n";
    } else {
        meta["trajectory"] = trajectory_json(tr);
        const std::string p = out_path(c, ".json");
        write_file(p, dump_json(meta));
        std::cout << "wrote " << p << "\n";
    }
    if (!tr.complete) {
        std::cerr << "error: trajectory stopped at t = " << format_double(tr.stop_time) << ": " << tr.stop_reason
                  << " (partial trajectory written)\n";
        return tr.error_code ? tr.error_code : static_cast<int>(ErrorKind::Domain);
    }
    return 0;
}

int cmd_compare(const Flags& f) {
    const RunConfig c = resolve(f);
    const CompareReport r = run_compare(c);
    json j = metadata("compare", config_to_json(c));
    j["report"] = r.to_json();
    write_file(out_path(c, "_compare.json"), dump_json(j));
    std::cout << r.table();
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
    return 0;
}

int cmd_adiabatic(const Flags& f) {
    const RunConfig c = resolve(f);
    if (c.model != "quartic" && c.model != "harmonic")
        throw ConfigError("field 'model': the adiabatic solver needs harmonic or quartic");
    const ClassicalHamiltonian H = c.hamiltonian();
    const AdiabaticTrajectory tr =
        solve_effective(c.adiabatic, H, c.params.hbar, c.initial.q, c.initial.p / H.m,
                        time_grid(c.time.t0, c.time.t1, c.time.samples), c.integrator);
    const std::vector<std::string> names{"q", "qdot", "G_0_2", "G_1_2", "G_2_2"};
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < tr.t.size(); ++i) rows.push_back({tr.q[i], tr.qdot[i], tr.G02[i], tr.G12[i], tr.G22[i]});
    json meta = metadata("adiabatic", config_to_json(c));
    meta["complete"] = tr.complete;
    meta["breakdown"] = tr.breakdown;
    meta["stop_reason"] = tr.stop_reason;
    meta["stop_time"] = tr.stop_time;
    meta["stats"] = stats_json(tr.stats);
    if (c.output.format == "csv") {
        write_file(out_path(c, "_adiabatic.csv"), csv_with_header(c, "adiabatic", names, tr.t, rows));
        write_file(out_path(c, "_adiabatic.json"), dump_json(meta));
    } else {
        json cols = json::object();
        cols["t"] = tr.t;
        for (std::size_t k = 0; k < names.size(); ++k) {
            std::vector<double> col;
            for (auto& r : rows) col.push_back(r[k]);
            cols[names[k]] = col;
        }
        meta["trajectory"] = cols;
        write_file(out_path(c, "_adiabatic.json"), dump_json(meta));
    }
    std::cout << "wrote " << out_path(c, c.output.format == "csv" ? "_adiabatic.csv" : "_adiabatic.json") << "\n";
    if (tr.breakdown) {
        std::cerr << "error: " << tr.stop_reason << " (partial trajectory written)\n";
        return static_cast<int>(ErrorKind::Domain);
    }
    return 0;
}

int cmd_brackets(const Flags& f) {
    const int nmax = f.nmax.value_or(2);
    if (nmax < 2 || nmax > 6) throw ConfigError("field 'nmax' must be in [2, 6] for bracket listings");
    if (f.dof < 1 || f.dof > 2) throw ConfigError("field 'dof' must be 1 or 2");
    std::vector<MomentIndex> all;
    for (int n = 2; n <= nmax; ++n)
        for (auto& i : indices_of_order(n, f.dof)) all.push_back(i);
    // Ascending momentum power within each order.
    std::stable_sort(all.begin(), all.end(), [](const MomentIndex& l, const MomentIndex& r) {
        return std::make_pair(l.order(), l.p) < std::make_pair(r.order(), r.p);
    });
    json list = json::array();
    std::ostringstream os;
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t k = i + 1; k < all.size(); ++k) {
            const MomentPolynomial P = bracket_moments(all[i], all[k]);
            const std::string rhs = P.empty() ? "0" : P.str();
            os << "{" << all[i].str() << "," << all[k].str() << "} = " << rhs << "\n";
            list.push_back({{"left", all[i].str()}, {"right", all[k].str()}, {"bracket", rhs}});
        }
    if (f.format.value_or("csv") == "json")
        std::cout << dump_json({{"tool", "momentflow"}, {"version", version()}, {"n_max", nmax}, {"dof", f.dof},
                                {"brackets", list}});
    else
        std::cout << os.str();
    return 0;
}

SemiclassicalState read_state(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open state file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("state file is not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_object()) throw ConfigError("state file must hold an object");
    SemiclassicalState s;
    s.n_max = 2;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k != "hbar" && k != "q" && k != "p" && k != "moments") throw ConfigError("unknown key '" + k + "' in state file");
    }
    try {
        s.hbar = j.value("hbar", 1.0);
        s.x = {j.value("q", 0.0), j.value("p", 0.0)};
        for (auto& [k, v] : j.at("moments").items()) {
            int a = 0, n = 0;
            if (std::sscanf(k.c_str(), "G_%d_%d", &a, &n) != 2 || a < 0 || a > n || n < 2)
                throw ConfigError("field 'moments." + k + "' is not a moment name G_a_n");
            s.set(a, n, v.get<double>());
            s.n_max = std::max(s.n_max, n);
        }
    } catch (const json::exception& e) {
        throw ConfigError("state file: " + std::string(e.what()));
    }
    if (!(s.hbar > 0.0)) throw ConfigError("field 'hbar' must be positive");
    for (int a = 0; a <= 2; ++a)
        if (!s.moments.count(MomentIndex::single(a, 2))) throw ConfigError("field 'moments' must list " + moment_column(a, 2));
    return s;
}

int cmd_uncertainty(const Flags& f) {
    SemiclassicalState s;
    std::uint64_t seed = f.seed.value_or(0);
    if (!f.state.empty()) {
        s = read_state(f.state);
    } else {
        const RunConfig c = resolve(f);
        s = initial_state(c);
        seed = c.seed;
    }
    const double margin = check_uncertainty_order2(s);
    const double scale = std::max(s.hbar * s.hbar / 4.0, 1e-300);
    json j{{"tool", "momentflow"}, {"version", version()}, {"hbar", s.hbar}};
    j["order2_margin"] = margin;
    j["order2_relative"] = margin / scale;
    j["saturated"] = std::abs(margin) <= 1e-12 * scale;
    j["physical"] = margin >= -1e-12 * scale;
    std::ostringstream os;
    os << "order2_margin " << format_double(margin) << "\n";
    try {
        const CharacteristicProvider prov = gaussian_provider(s);
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> nd(0.0, 1.0);
        json gen = json::array();
        double worst = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 10; ++i) {
            Eigen::VectorXd al(2), be(2);
            al << nd(rng), nd(rng);
            be << nd(rng), nd(rng);
            const double r = check_uncertainty_generating(prov, al, be, s.hbar);
            worst = std::min(worst, r);
            gen.push_back({{"alpha", {al(0), al(1)}}, {"beta", {be(0), be(1)}}, {"residual", r}});
        }
        j["generating_function"] = gen;
        j["generating_min_residual"] = worst;
        os << "generating_min_residual " << format_double(worst) << "\n";
    } catch (const DomainError& e) {
        j["generating_function_skipped"] = e.what();
        os << "generating function check skipped: " << e.what() << "\n";
    }
    if (f.format.value_or("csv") == "json")
        std::cout << dump_json(j);
    else
        std::cout << os.str() << (j["saturated"].get<bool>() ? "saturated\n" : j["physical"].get<bool>() ? "physical\n" : "violated\n");
    return 0;
}

int cmd_order_check(const Flags& f) {
    const RunConfig c = resolve(f);
    const OrderCheckResult r = order_check(c.hamiltonian(), c.order_check_options());
    json j = metadata("order-check", config_to_json(c));
    j["hbars"] = r.hbars;
    j["mismatch"] = r.mismatch;
    j["exact"] = r.exact;
    if (!r.exact) j["slope"] = r.slope;
    j["passed"] = r.passed;
    j["verdict"] = r.verdict;
    write_file(out_path(c, "_order_check.json"), dump_json(j));
    for (std::size_t i = 0; i < r.hbars.size(); ++i)
        std::cout << "hbar " << format_double(r.hbars[i]) << " mismatch " << format_double(r.mismatch[i]) << "\n";
    if (r.exact)
        std::cout << "exact\n";
    else
        std::cout << "slope " << format_double(r.slope) << "\n" << r.verdict << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"momentflow: semiclassical moment dynamics"};
    app.set_version_flag("--version", version());
    app.require_subcommand(1);
    Flags f;
    auto* sim = app.add_subcommand("simulate", "integrate the truncated moment system");
    auto* cmp = app.add_subcommand("compare", "compare against the Fock oracle");
    auto* adi = app.add_subcommand("adiabatic", "solve the corrected Newton equation");
    auto* brk = app.add_subcommand("brackets", "list moment brackets");
    auto* unc = app.add_subcommand("uncertainty", "uncertainty margins of a state");
    auto* ord = app.add_subcommand("order-check", "hbar order of an effective system");
    for (auto* s : {sim, cmp, adi, brk, unc, ord}) add_common(s, f);
    brk->add_option("--dof", f.dof, "degrees of freedom (1 or 2)");
    unc->add_option("state", f.state, "state JSON file {hbar, q, p, moments}");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(ErrorKind::Config);
    }

    try {
        if (sim->parsed()) return cmd_simulate(f);
        if (cmp->parsed()) return cmd_compare(f);
        if (adi->parsed()) return cmd_adiabatic(f);
        if (brk->parsed()) return cmd_brackets(f);
        if (unc->parsed()) return cmd_uncertainty(f);
        if (ord->parsed()) return cmd_order_check(f);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(ErrorKind::Config);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return static_cast<int>(ErrorKind::Internal);
    }
    return static_cast<int>(ErrorKind::Internal);
}
