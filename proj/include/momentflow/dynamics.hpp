#pragma once

// Integration of the truncated moment systems and the analytic reference
// solutions of the linear examples (harmonic oscillator, free particle).

#include "momentflow/hamiltonian.hpp"
#include "momentflow/integrator.hpp"

#include <array>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace momentflow {

struct Trajectory {
    std::vector<std::string> names;  // classical variables then moments
    std::vector<double> t;
    std::vector<SemiclassicalState> states;
    IntegratorStats stats;
    bool complete = true;
    int error_code = 0;
    std::string stop_reason;
    double stop_time = 0.0;

    // Time series of a named column ("q", "p", "G_1_2", ...).
    std::vector<double> column(const std::string& name) const;
};

// Integrate an equation system from s0 through the sample times. Throws
// DomainError on an unphysical s0 (order-2 margin below -1e-12 relative).
// When allow_partial is false a stopped run rethrows its error; otherwise
// the partial trajectory is returned with complete = false.
Trajectory integrate(const EquationSystem& sys, const SemiclassicalState& s0, const std::vector<double>& times,
                     const IntegratorOptions& opt = {}, bool allow_partial = false);

// Coherent-state values of the dimensionless moments,
//   G~^{a,n} = a! (n-a)! / (2^n (a/2)! ((n-a)/2)!) for even a, n.
double coherent_moment_tilde(int a, int n);

// Dimensionful coherent-state moments of the oscillator (m, omega) at (q, p).
SemiclassicalState coherent_state(double q, double p, double hbar, double m, double omega, int n_max);

// Classical harmonic motion from (q0, p0).
std::array<double, 2> harmonic_classical(double q0, double p0, double m, double omega, double t);

// ---------------------------------------------------------------------------
// Harmonic oscillator: dimensionless moments along the classical flow.

struct PolarPoint {
    double r = 0.0;      // sqrt(p^2/m + m w^2 q^2)
    double theta = 0.0;  // tan(theta) = m w q / p
};

PolarPoint harmonic_polar(double q, double p, double m, double omega);

// The matrix (n)M with (n)M^a_b G~^b = (n-a) G~^{a+1} - a G~^{a-1}.
Eigen::MatrixXd harmonic_mode_matrix(int n);

struct HarmonicModeConstants {
    int n = 2;
    // A^b(r), b = 0..n: the values of G~^{b,n} at theta = 0.
    std::vector<double> amplitudes;
};

// G~^{a,n}(r, theta) = (exp theta M)^a_b A^b(r).
std::vector<double> harmonic_analytic(const HarmonicModeConstants& A, double theta);

// n = 2 mode form with A^{0,2} and the A^{+-2,2} amplitudes:
//   G~^{0,2} = A0 - e^{2i th} A2 - e^{-2i th} Am2
//   G~^{1,2} = -i e^{2i th} A2 + i e^{-2i th} Am2
//   G~^{2,2} = A0 + e^{2i th} A2 + e^{-2i th} Am2
std::array<std::complex<double>, 3> harmonic_n2_modes(double A0, std::complex<double> A2,
                                                      std::complex<double> Am2, double theta);

// (A0)^2 - 4 A2 Am2 - 1/4; non-negative for physical amplitudes.
double harmonic_n2_margin(double A0, std::complex<double> A2, std::complex<double> Am2);

// ---------------------------------------------------------------------------
// Free particle.

// G^{a,n}(q,p) = p^a sum_{i=0}^{n-a} c_i (n-a)!/(n-a-i)! q^{n-a-i}, c = (c_0..c_n).
double free_particle_moments(const std::vector<double>& c, double q, double p, int a, int n);

// Constants (c_0, c_1, c_2) reproducing given order-2 moments at (q0, p0).
std::vector<double> free_particle_fit(double q0, double p0, double G02, double G12, double G22);

// 2 c_0 c_2 - c_1^2 - hbar^2 / (4 p^2); zero at minimal uncertainty.
double free_particle_margin(const std::vector<double>& c, double p, double hbar);

// Order-2 moments at time t from their initial values.
std::array<double, 3> free_particle_spread(double G02, double G12, double G22, double m, double t);

}  // namespace momentflow
