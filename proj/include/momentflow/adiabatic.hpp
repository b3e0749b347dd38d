#pragma once

// Adiabatic order-(2,1) solution for H = p^2/2m + m omega^2 q^2/2 + U(q) around
// the oscillator ground state and the corrected Newton equation
//   m_eff(q) q'' + B(q) q'^2 + F(q) = 0.
//
// Moments returned by the g* functions are dimensionless, G~ of the
// oscillator basis (m, omega, hbar); w(q) = 1 + U''(q)/(m omega^2).

#include "momentflow/hamiltonian.hpp"
#include "momentflow/integrator.hpp"

#include <string>
#include <vector>

namespace momentflow {

// Scaling of the lambda^2 corrections (mass, q'^2 term, G_2) with C_2.
//   Linear: factor 2 C_2, from integrating the order-2 equations with a free C_2.
//   Cubic:  factor (2 C_2)^3, the C_2^3 mass law normalized to the vacuum.
enum class MassLaw { Linear, Cubic };

MassLaw parse_mass_law(const std::string& s);
std::string mass_law_name(MassLaw m);

struct AdiabaticConfig {
    int e = 2;  // adiabatic order, <= 2
    int k = 1;  // hbar order, <= 1
    double C2 = 0.5;
    std::vector<double> Cn;  // accepted, only C_2 enters at this order
    MassLaw mass_law = MassLaw::Linear;

    void validate() const;
    // 2 C_2: vacuum value 1.
    double force_scale() const { return 2.0 * C2; }
    double mass_scale() const;
};

constexpr double kBreakdownThreshold = 1e-8;

// w = 1 + U''/(m omega^2); throws AdiabaticBreakdown at or below the threshold.
double adiabatic_w(double q, const ClassicalHamiltonian& H);

// G~_0^{a,n}(q). Vacuum form a!(n-a)!/(2^n (a/2)!((n-a)/2)!) w^{(2a-n)/4};
// n = 2 values scale with 2 C_2. Zero for odd a or n.
double g0_moments(double q, int n, int a, const AdiabaticConfig& cfg, const ClassicalHamiltonian& H);

// G~_1^{1,2} = d/dt G~_0^{0,2} / (2 omega).
double g1_correction(double qdot, double q, const AdiabaticConfig& cfg, const ClassicalHamiltonian& H);

// G~_2^{0,2} in the compact form -(2/omega^2) G0^{5/2} d^2/dt^2 G0^{1/2} (C_2 = 1/2)
// and the expanded U''', U'''' form; both carry the configured C_2 scaling.
double g2_correction(double q, double qdot, double qddot, const AdiabaticConfig& cfg,
                     const ClassicalHamiltonian& H);
double g2_correction_expanded(double q, double qdot, double qddot, const AdiabaticConfig& cfg,
                              const ClassicalHamiltonian& H);

struct EffectiveCoefficients {
    double m_eff = 0.0;
    double B = 0.0;
    double F = 0.0;
    double w = 1.0;
};

EffectiveCoefficients effective_coefficients(double q, double hbar, const AdiabaticConfig& cfg,
                                             const ClassicalHamiltonian& H);

// q'' from the corrected Newton equation.
double effective_acceleration(double q, double qdot, double hbar, const AdiabaticConfig& cfg,
                              const ClassicalHamiltonian& H);

// Order-2 adiabatic moments at a point (q, q', q'') split by lambda order,
// with their time derivatives at the same order. Dimensionless.
struct AdiabaticMoments {
    double G0[3] = {0, 0, 0};   // G~_0^{a,2}
    double G1[3] = {0, 0, 0};   // G~_1^{a,2}
    double G2[3] = {0, 0, 0};   // G~_2^{a,2}
    double dG0[3] = {0, 0, 0};  // d/dt G~_0
    double dG1[3] = {0, 0, 0};  // d/dt G~_1
    double total(int a) const { return G0[a] + G1[a] + G2[a]; }
};

AdiabaticMoments adiabatic_moments(double q, double qdot, double qddot, const AdiabaticConfig& cfg,
                                   const ClassicalHamiltonian& H);

// Residuals of d/dt G~_{e-1} = {G~_e, H_Q} (linear oscillator part) for e = 1, 2;
// max over a. The time derivatives come from the chain rule.
double adiabatic_recursion_residual(const AdiabaticMoments& M, int e, double q, const ClassicalHamiltonian& H);

// sum_{a even} C(n/2, a/2) w^{(n-a)/2} d/dt G~_0^{a,n}
double adiabatic_constraint_sum(double q, double qdot, int n, const AdiabaticConfig& cfg, const ClassicalHamiltonian& H);

struct AdiabaticTrajectory {
    std::vector<double> t, q, qdot;
    // Reconstructed dimensionful order-2 moments per sample.
    std::vector<double> G02, G12, G22;
    IntegratorStats stats;
    bool complete = true;
    bool breakdown = false;
    std::string stop_reason;
    double stop_time = 0.0;
};

AdiabaticTrajectory solve_effective(const AdiabaticConfig& cfg, const ClassicalHamiltonian& H, double hbar,
                                    double q0, double qdot0, const std::vector<double>& times,
                                    const IntegratorOptions& opt = {});

}  // namespace momentflow
