#pragma once

// Squeezed coherent states in m omega = 1 units: moments, density-operator
// matrix elements between coherent states, and the pulled-back symplectic form.
//
// Phase-space vectors are x = (q, p); eps^{qp} = +1.

#include "momentflow/hamiltonian.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>

namespace momentflow {

Eigen::Matrix2d epsilon2();

struct SqueezeMatrix {
    Eigen::Matrix2d g = Eigen::Matrix2d::Zero();  // symmetric

    explicit SqueezeMatrix(const Eigen::Matrix2d& m);
    SqueezeMatrix() = default;
    // e^{g eps}
    Eigen::Matrix2d exp_g_eps() const;
};

// Covariance of |x, g>: G = (hbar/2) E^T E with E = e^{g eps}. The squeezing
// unitary acts as S^dag x S = E^T x on the phase-space vector.
Eigen::Matrix2d squeezed_covariance(const SqueezeMatrix& g, double hbar);

// G^{a,n} of the squeezed state (a momentum slots, Isserlis pairings of the
// covariance; zero for odd n).
double squeezed_moment(const SqueezeMatrix& g, int a, int n, double hbar);
// All moments 2 <= n <= n_max at phase-space point x.
SemiclassicalState squeezed_moments(const SqueezeMatrix& g, const Eigen::Vector2d& x, int n_max, double hbar);

// <alpha| rho(x) |alpha'> for the Gaussian density operator with covariance G,
// alpha, alpha' phase-space labels of coherent states:
//   det(G/hbar + 1/2)^{-1/2} exp(-(1/4hbar) S eps (2G/hbar + 1)^{-1} eps S)
//   * exp(-(i/4hbar)(a'-a) eps (a'+a) - (1/4hbar)|a'-a|^2),
//   S_i = (a'-a)_i + i eps_ij (a'+a-2x)^j.
// Hermitian by construction. Throws DomainError for a degenerate G.
std::complex<double> rho_element(const Eigen::Vector2d& alpha, const Eigen::Vector2d& alpha_p,
                                 const Eigen::Vector2d& x, const Eigen::Matrix2d& G, double hbar);

// Tr rho = int d^2a/(2 pi hbar) <a|rho|a> on an n x n lattice of half-width
// `width` standard deviations.
double rho_trace(const Eigen::Vector2d& x, const Eigen::Matrix2d& G, double hbar, int n = 64, double width = 9.0);
// Tr rho^2 = int int |<a|rho|a'>|^2 / (2 pi hbar)^2 on an n^4 lattice.
double rho_purity(const Eigen::Vector2d& x, const Eigen::Matrix2d& G, double hbar, int n = 36, double width = 8.0);

// Factor of the classical block 2 eps_ij dx^i ^ dx^j as it stands; the
// canonical form dq ^ dp corresponds to 1/2.
constexpr double kOmegaClassicalFactor = 2.0;

// Coordinates y = (q, p, g_qq, g_qp, g_pp); Omega = sum_{A,B} W_AB dy^A ^ dy^B
// with W antisymmetric.
struct PulledBackForm {
    Eigen::Matrix<double, 5, 5> W = Eigen::Matrix<double, 5, 5>::Zero();
    // For a field g(x): Omega restricted to the x-chart = (classical + correction) dq ^ dp.
    double classical = 0.0;
    double correction = 0.0;
    double total() const { return classical + correction; }
};

// dg[k] = d g / d x^k at x.
PulledBackForm omega_pullback(const SqueezeMatrix& g, const Eigen::Matrix2d dg[2], double hbar);
// Central differences of g(x) with the given step.
PulledBackForm omega_pullback(const std::function<Eigen::Matrix2d(const Eigen::Vector2d&)>& gfield,
                              const Eigen::Vector2d& x, double hbar, double step = 1e-6);

// Squeeze field of the order-0 adiabatic moments of H: G~^{0,2} = w^{-1/2}/2,
// G~^{2,2} = w^{1/2}/2, i.e. g_qp = ln(w)/4.
Eigen::Matrix2d adiabatic_squeeze(double q, const ClassicalHamiltonian& H);
Eigen::Matrix2d adiabatic_squeeze_dq(double q, const ClassicalHamiltonian& H);

}  // namespace momentflow
