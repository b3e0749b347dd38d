#include "momentflow/cosmology.hpp"

#include "momentflow/errors.hpp"

#include <algorithm>
#include <cmath>

namespace momentflow {

namespace {

void require_p(double p) {
    if (!(p > 0.0)) throw DomainError("cosmology needs p > 0");
}

// e^{3x/2} = (ell c^2 / sqrt p)^{3/4}
double u_of(const CosmologyParams& P, double c, double p) {
    return std::pow(P.length_scale() * c * c / std::sqrt(p), 0.75);
}

const EquationSystem& order2_system(const CosmologyParams& P, EquationSystem& storage) {
    storage = generate_eom(expand_quantum_hamiltonian(P.hamiltonian(), 2));
    return storage;
}

std::vector<double> direct_rhs(const CosmologyParams& P, double c, double p) {
    EquationSystem sys;
    order2_system(P, sys);
    std::vector<double> dy;
    sys.rhs(sys.pack(cosmology_state(P, c, p)), dy, P.hbar);
    return dy;
}

CosmologyParams with_constants(CosmologyParams P, double g0, double g32, double g3) {
    P.g0 = g0;
    P.g32 = g32;
    P.g3 = g3;
    return P;
}

}  // namespace

double CosmologyParams::planck_length() const { return std::sqrt(kappa * hbar); }

CosmologyXY cosmology_xy(const CosmologyParams& P, double c, double p) {
    require_p(p);
    const double l = P.length_scale();
    return {0.5 * std::log(l * c * c / std::sqrt(p)), c * c * std::sqrt(p) / l};
}

double cosmology_uncertainty_bound(const CosmologyParams& P, double c, double p) {
    require_p(p);
    const double lp = P.planck_length();
    return P.gamma * P.gamma * std::pow(lp, 4) /
           (4.0 * 81.0 * std::pow(P.length_scale(), 1.5) * std::pow(c * c * std::sqrt(p), 2.5));
}

CosmologyG cosmology_g_solution(const CosmologyParams& P, double c, double p) {
    require_p(p);
    const double u = u_of(P, c, p), u2 = u * u;
    CosmologyG g;
    g.g02 = P.g0 + P.g32 * u + P.g3 * u2;
    g.g12 = 2.0 * P.g0 - P.g32 * u - 4.0 * P.g3 * u2;
    g.g22 = 4.0 * P.g0 - 8.0 * P.g32 * u + 16.0 * P.g3 * u2;
    g.margin = 4.0 * P.g0 * P.g3 - P.g32 * P.g32 - cosmology_uncertainty_bound(P, c, p);
    g.admissible = g.margin >= 0.0;
    return g;
}

SemiclassicalState cosmology_state(const CosmologyParams& P, double c, double p) {
    const CosmologyG g = cosmology_g_solution(P, c, p);
    SemiclassicalState s;
    s.hbar = P.hbar;
    s.n_max = 2;
    s.x = {c, p};
    s.set(0, 2, c * c * g.g02);
    s.set(1, 2, c * p * g.g12);
    s.set(2, 2, p * p * g.g22);
    return s;
}

double cosmology_constraint_c(const CosmologyParams& P, double p) {
    require_p(p);
    return std::sqrt(P.gamma * P.gamma * P.kappa * P.E / (3.0 * std::sqrt(p)));
}

double cosmology_suitable_g0(const CosmologyParams& P, double c, double p) {
    require_p(p);
    return std::pow(P.planck_length(), 4) * std::pow(P.length_scale(), -1.5) *
           std::pow(c * c * std::sqrt(p), -2.5);
}

CosmologyRates cosmology_effective_closed_form(const CosmologyParams& P, double c, double p) {
    require_p(p);
    const double u = u_of(P, c, p), u2 = u * u;
    CosmologyRates r;
    r.cdot = -c * c / std::sqrt(p) * (1.0 + 0.5 * P.g0 - P.g32 * u + 11.0 * P.g3 * u2) / P.gamma;
    r.pdot = c * std::sqrt(p) * (4.0 + 2.0 * P.g0 + 2.0 * P.g32 * u - 16.0 * P.g3 * u2) / P.gamma;
    return r;
}

CosmologyRates cosmology_effective_direct(const CosmologyParams& P, double c, double p) {
    const auto dy = direct_rhs(P, c, p);
    return {dy[0], dy[1]};
}

CosmologyComparison cosmology_compare(const CosmologyParams& P, double c, double p) {
    CosmologyComparison out;
    // Each term is linear in its constant; scaling the constant to make the
    // term comparable to the classical part avoids cancellation.
    const double u = u_of(P, c, p);
    const std::array<double, 4> scale = {0.0, 1.0, 1.0 / u, 1.0 / (u * u)};
    CosmologyRates pr0{}, dr0{};
    for (int k = 0; k < 4; ++k) {
        std::array<double, 3> g{0.0, 0.0, 0.0};
        if (k > 0) g[k - 1] = scale[k];
        const auto Q = with_constants(P, g[0], g[1], g[2]);
        const auto pr = cosmology_effective_closed_form(Q, c, p);
        const auto dr = cosmology_effective_direct(Q, c, p);
        if (k == 0) {
            pr0 = pr;
            dr0 = dr;
            out.closed_c[0] = pr.cdot;
            out.closed_p[0] = pr.pdot;
            out.direct_c[0] = dr.cdot;
            out.direct_p[0] = dr.pdot;
        } else {
            out.closed_c[k] = (pr.cdot - pr0.cdot) / scale[k];
            out.closed_p[k] = (pr.pdot - pr0.pdot) / scale[k];
            out.direct_c[k] = (dr.cdot - dr0.cdot) / scale[k];
            out.direct_p[k] = (dr.pdot - dr0.pdot) / scale[k];
        }
    }
    for (int k = 0; k < 4; ++k) {
        out.ratio_c[k] = out.direct_c[k] / out.closed_c[k];
        out.ratio_p[k] = out.direct_p[k] / out.closed_p[k];
        out.factor_c += out.ratio_c[k] / 4.0;
        out.factor_p += out.ratio_p[k] / 4.0;
    }
    for (int k = 0; k < 4; ++k) {
        out.spread_c = std::max(out.spread_c, std::abs(out.ratio_c[k] - out.factor_c));
        out.spread_p = std::max(out.spread_p, std::abs(out.ratio_p[k] - out.factor_p));
    }
    return out;
}

std::array<double, 3> cosmology_moment_rates_closed_form(const CosmologyParams& P, double c, double p) {
    require_p(p);
    const double u = u_of(P, c, p), u2 = u * u, gi = 1.0 / P.gamma;
    return {-gi * c * c * c / std::sqrt(p) * (P.g0 + 2.5 * P.g32 * u + 4.0 * P.g3 * u2),
            3.0 * gi * c * c * std::sqrt(p) * (P.g0 + 2.0 * P.g3 * u2),
            4.0 * gi * c * std::pow(p, 1.5) * (2.0 * P.g0 + 5.0 * P.g32 * u + 2.0 * P.g3 * u2)};
}

std::array<double, 3> cosmology_moment_rates_direct(const CosmologyParams& P, double c, double p) {
    const auto dy = direct_rhs(P, c, p);
    return {dy[2], dy[3], dy[4]};
}

}  // namespace momentflow
