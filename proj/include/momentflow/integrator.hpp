#pragma once

// Explicit Runge-Kutta 5(4) (Dormand-Prince) with dense output, wrapping
// boost::numeric::odeint.

#include <functional>
#include <string>
#include <vector>

namespace momentflow {

struct IntegratorOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    // Fixed-step mode: every sample interval is split into equal steps no
    // longer than dt.
    bool fixed_step = false;
    double dt = 1e-3;
    double initial_dt = 1e-4;
    double max_dt = 0.0;  // 0 = unlimited
    // Step-size floor relative to max(1, |t|).
    double min_dt = 1e-13;
};

struct IntegratorStats {
    long steps = 0;
    long rejected = 0;
    long rhs_evals = 0;
    double abs_tol = 0.0;
    double rel_tol = 0.0;
    bool fixed_step = false;
};

using OdeRhs = std::function<void(const std::vector<double>& y, std::vector<double>& dydt, double t)>;

struct OdeSolution {
    std::vector<double> t;
    std::vector<std::vector<double>> y;
    IntegratorStats stats;
    // False when the run stopped early; error_* then describe why.
    bool complete = true;
    int error_code = 0;  // ErrorKind value
    std::string error;
    double stop_time = 0.0;
};

// Integrates through the strictly increasing (or strictly decreasing) sample
// times. Never throws for domain problems: NaN/inf, errors raised by the
// right-hand side and step-size underflow end the run and are recorded.
OdeSolution solve_ode(const OdeRhs& f, std::vector<double> y0, const std::vector<double>& times,
                      const IntegratorOptions& opt = {});

// Evenly spaced grid with `samples` points including both ends.
std::vector<double> time_grid(double t0, double t1, int samples);

}  // namespace momentflow
