#pragma once

// Isotropic cosmology H = -3 c^2 sqrt(p) / (gamma^2 kappa) + E with
// {c, p} = gamma kappa / 3, its n = 2 moment solution and effective equations.

#include "momentflow/hamiltonian.hpp"

#include <array>

namespace momentflow {

struct CosmologyParams {
    double gamma = 1.0;
    double kappa = 1.0;
    double E = 1.0;
    double hbar = 1.0;
    double ell = 0.0;  // length scale; 0 selects kappa E
    // Integration constants of the order-2 solution (dimensionless).
    double g0 = 0.0;
    double g32 = 0.0;
    double g3 = 0.0;

    double length_scale() const { return ell > 0.0 ? ell : kappa * E; }
    double planck_length() const;  // sqrt(kappa hbar)
    ClassicalHamiltonian hamiltonian() const { return ClassicalHamiltonian::cosmology(gamma, kappa, E); }
};

// e^{2x} = ell c^2 / sqrt(p), y = c^2 sqrt(p) / ell.
struct CosmologyXY {
    double x = 0.0;
    double y = 0.0;
};
CosmologyXY cosmology_xy(const CosmologyParams& P, double c, double p);

struct CosmologyG {
    double g02 = 0.0, g12 = 0.0, g22 = 0.0;
    double margin = 0.0;  // 4 g0 g3 - g32^2 - bound
    bool admissible = true;
};

// g^{0,2} = g0 + g32 e^{3x/2} + g3 e^{3x}
// g^{1,2} = 2 g0 - g32 e^{3x/2} - 4 g3 e^{3x}
// g^{2,2} = 4 g0 - 8 g32 e^{3x/2} + 16 g3 e^{3x}
CosmologyG cosmology_g_solution(const CosmologyParams& P, double c, double p);

// gamma^2 l_P^4 / (2^2 3^4 ell^{3/2} (c^2 sqrt p)^{5/2})
double cosmology_uncertainty_bound(const CosmologyParams& P, double c, double p);

// State with G^{a,2} = c^{2-a} p^a g^{a,2}.
SemiclassicalState cosmology_state(const CosmologyParams& P, double c, double p);

// c on the constraint surface H = 0 at given p.
double cosmology_constraint_c(const CosmologyParams& P, double p);

// g0 = l_P^4 ell^{-3/2} (c^2 sqrt p)^{-5/2}
double cosmology_suitable_g0(const CosmologyParams& P, double c, double p);

struct CosmologyRates {
    double cdot = 0.0;
    double pdot = 0.0;
};

// Closed-form effective equations
//   gamma c' = -c^2 p^{-1/2} (1 + g0/2 - g32 u + 11 g3 u^2)
//   gamma p' = c sqrt(p) (4 + 2 g0 + 2 g32 u - 16 g3 u^2),  u = (ell c^2 p^{-1/2})^{3/4}.
CosmologyRates cosmology_effective_closed_form(const CosmologyParams& P, double c, double p);

// {x, H_Q} from the generated order-2 equations with the g-solution inserted.
CosmologyRates cosmology_effective_direct(const CosmologyParams& P, double c, double p);

struct CosmologyComparison {
    // Terms ordered (classical, g0, g32, g3), each for the constant set to 1.
    std::array<double, 4> closed_c{}, direct_c{}, closed_p{}, direct_p{};
    std::array<double, 4> ratio_c{}, ratio_p{};  // direct / closed form
    double factor_c = 0.0, factor_p = 0.0;       // mean ratio
    double spread_c = 0.0, spread_p = 0.0;       // max |ratio - factor|
};
CosmologyComparison cosmology_compare(const CosmologyParams& P, double c, double p);

// Rates of (G^{0,2}, G^{1,2}, G^{2,2}): closed forms and direct
// evaluation of {G, H_Q} with the g-solution inserted.
std::array<double, 3> cosmology_moment_rates_closed_form(const CosmologyParams& P, double c, double p);
std::array<double, 3> cosmology_moment_rates_direct(const CosmologyParams& P, double c, double p);

}  // namespace momentflow
