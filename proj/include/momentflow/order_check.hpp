#pragma once

// Order diagnostic for effective systems: the mismatch between the quantum
// Hamiltonian flow X_H and the pushforward of the effective flow, as a power
// of hbar.

#include "momentflow/adiabatic.hpp"
#include "momentflow/hamiltonian.hpp"

#include <array>
#include <string>
#include <vector>

namespace momentflow {

enum class Embedding {
    Coherent,   // vacuum moments of the oscillator at every order
    Adiabatic,  // order-(2,1) adiabatic moments, corrected Newton dynamics
    ConstantG,  // fixed moments (hbar/2 scale), classical dynamics
};

Embedding parse_embedding(const std::string& s);
std::string embedding_name(Embedding e);

struct OrderCheckOptions {
    Embedding embedding = Embedding::Adiabatic;
    std::vector<double> hbars;  // empty: 5 values log-spaced on [1e-3, 1e-1]
    std::vector<std::array<double, 2>> points;  // effective states (q, qdot); empty: defaults
    int n_eff = 2;              // moment order carried by the embedding
    int k = 1;                  // claimed hbar order of the effective system
    AdiabaticConfig adiabatic;  // used by Embedding::Adiabatic
    int threads = 0;            // 0: MOMENTFLOW_THREADS or hardware concurrency
};

struct OrderCheckResult {
    std::vector<double> hbars;
    std::vector<double> mismatch;  // Euclidean norm combined over the sample points
    std::vector<double> scale;     // norm of X_H itself
    bool exact = false;
    double slope = 0.0;
    bool passed = false;  // exact, or slope >= k + 1 - 0.2
    std::string verdict;  // "exact", "order k confirmed" or a failure message
};

// Components of X_H assembled from the generated equations at order n_eff + 2
// with zero closure, at the embedded state.
std::vector<double> order_mismatch_components(const ClassicalHamiltonian& H, double hbar, double q, double qdot,
                                              const OrderCheckOptions& opt);

OrderCheckResult order_check(const ClassicalHamiltonian& H, const OrderCheckOptions& opt);

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Thread cap from MOMENTFLOW_THREADS (>= 1), else hardware concurrency.
int thread_cap();

}  // namespace momentflow
