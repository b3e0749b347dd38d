#pragma once

// Hand-rolled generators for property tests.

#include "momentflow/moment_algebra.hpp"

#include <random>
#include <vector>

namespace testgen {

inline std::mt19937_64& rng() {
    static std::mt19937_64 r(20261014);
    return r;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

inline momentflow::MomentIndex index(int n_lo, int n_hi, int dof) {
    const auto all = momentflow::indices_of_order(integer(n_lo, n_hi), dof);
    return all[integer(0, static_cast<int>(all.size()) - 1)];
}

}  // namespace testgen
