#pragma once

// Moment dynamics and the adiabatic solver against the Fock oracle on the
// same initial state.

#include "momentflow/config.hpp"
#include "momentflow/dynamics.hpp"
#include "momentflow/oracle.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace momentflow {

struct OracleTrajectory {
    std::vector<double> t;
    std::vector<SemiclassicalState> states;
    double max_tail = 0.0;  // largest tail_weight seen
};

// Exact evolution with moments through order n (n <= 8).
OracleTrajectory oracle_trajectory(const ClassicalHamiltonian& H, const WaveVector& psi0,
                                   const std::vector<double>& times, int n);

// Oracle wave function of the configured initial state (coherent or squeezed).
WaveVector oracle_initial_state(const RunConfig& c);

// Hamilton's equations without quantum corrections.
Trajectory classical_trajectory(const ClassicalHamiltonian& H, double q0, double p0, const std::vector<double>& times,
                                const IntegratorOptions& opt = {});

struct VariableError {
    std::string name;
    double max = 0.0;
    double rms = 0.0;
};

struct CompareReport {
    std::string model;
    std::vector<VariableError> moments;  // truncated moment system vs oracle
    bool has_adiabatic = false;
    VariableError adiabatic_q;           // adiabatic <q> vs oracle
    VariableError classical_q;           // classical q vs oracle
    double improvement_ratio = 0.0;      // adiabatic_q.max / classical_q.max
    std::vector<std::string> warnings;

    const VariableError& get(const std::string& name) const;
    nlohmann::json to_json() const;
    std::string table() const;
};

// Errors of q, p and G^{a,n} (n <= min(n_max, 4)); for the quartic model also
// the adiabatic and classical <q>. Throws ConfigError for cosmology and
// CapacityError when the initial state does not fit the oracle basis.
CompareReport run_compare(const RunConfig& c);

}  // namespace momentflow
