#pragma once

// Run configuration: a single JSON document, validated strictly (unknown keys
// are rejected, messages name the offending field).

#include "momentflow/adiabatic.hpp"
#include "momentflow/cosmology.hpp"
#include "momentflow/hamiltonian.hpp"
#include "momentflow/integrator.hpp"
#include "momentflow/order_check.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace momentflow {

struct PhysicalParams {
    double m = 1.0;
    double omega = 1.0;
    double delta = 0.1;
    double hbar = 1.0;
    // cosmology
    double gamma = 1.0;
    double kappa = 1.0;
    double E = 1.0;
    double ell = 0.0;
    double g0 = 0.0;
    double g32 = 0.0;
    double g3 = 0.0;
};

struct InitialState {
    // coherent | squeezed | moments | cosmology
    std::string type = "coherent";
    double q = 1.0;
    double p = 0.0;
    std::array<double, 3> g{0.0, 0.0, 0.0};     // squeezed: (g_qq, g_qp, g_pp)
    std::map<std::string, double> moments;      // moments: "G_a_n" -> value
    bool constraint = true;                     // cosmology: c from H = 0 when true
    bool suitable_g0 = false;                   // cosmology: g0 from the small-correction choice
};

struct TimeSpan {
    double t0 = 0.0;
    double t1 = 10.0;
    int samples = 201;
};

struct OracleSettings {
    int D = 120;
};

struct OutputSettings {
    std::string dir = ".";
    std::string prefix = "run";
    std::string format = "csv";  // csv | json
};

struct OrderCheckSettings {
    std::string embedding = "adiabatic";
    std::vector<double> hbars;
    int k = 1;
};

struct RunConfig {
    std::string model = "harmonic";  // harmonic | free | quartic | cosmology
    PhysicalParams params;
    int n_max = 3;
    std::string closure = "zero";
    IntegratorOptions integrator;
    InitialState initial;
    TimeSpan time;
    OracleSettings oracle;
    AdiabaticConfig adiabatic;
    OrderCheckSettings order_check;
    OutputSettings output;
    std::uint64_t seed = 0;

    // Throws ConfigError naming the failing field.
    void validate() const;

    ClassicalHamiltonian hamiltonian() const;
    CosmologyParams cosmology() const;
    ClosurePolicy closure_policy() const { return parse_closure(closure); }
    OrderCheckOptions order_check_options() const;
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);
RunConfig load_config(const std::string& path);

// Initial semiclassical state of the configured model, dimensionful, through
// order n_max.
SemiclassicalState initial_state(const RunConfig& c);

}  // namespace momentflow
