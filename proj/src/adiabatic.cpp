#include "momentflow/adiabatic.hpp"

#include "momentflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace momentflow {

namespace {

double fact(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

double binom(int n, int k) { return fact(n) / (fact(k) * fact(n - k)); }

void require_oscillator(const ClassicalHamiltonian& H) {
    if (H.kind != ClassicalHamiltonian::Kind::Oscillator) throw ConfigError("adiabatic solver needs an oscillator");
    if (!(H.m > 0.0) || !(H.omega > 0.0)) throw DomainError("adiabatic solver needs m > 0 and omega > 0");
}

// Derivatives of w(q) = 1 + U''/(m omega^2).
struct WJet {
    double w, w1, w2;
};

WJet w_jet(double q, const ClassicalHamiltonian& H) {
    const double mw2 = H.m * H.omega * H.omega;
    return {adiabatic_w(q, H), H.U(q, 3) / mw2, H.U(q, 4) / mw2};
}

// f = w^s and its first two q-derivatives.
struct Jet {
    double f, f1, f2;
};

Jet power_jet(const WJet& j, double s) {
    const double f = std::pow(j.w, s);
    const double f1 = s * std::pow(j.w, s - 1.0) * j.w1;
    const double f2 = s * (s - 1.0) * std::pow(j.w, s - 2.0) * j.w1 * j.w1 + s * std::pow(j.w, s - 1.0) * j.w2;
    return {f, f1, f2};
}

}  // namespace

MassLaw parse_mass_law(const std::string& s) {
    if (s == "linear") return MassLaw::Linear;
    if (s == "cubic") return MassLaw::Cubic;
    throw ConfigError("unknown mass law '" + s + "'");
}

std::string mass_law_name(MassLaw m) { return m == MassLaw::Linear ? "linear" : "cubic"; }

void AdiabaticConfig::validate() const {
    if (e < 0 || e > 2) throw ConfigError("adiabatic order e must be 0, 1 or 2");
    if (k < 0 || k > 1) throw ConfigError("hbar order k must be 0 or 1");
    if (!(C2 > 0.0)) throw ConfigError("C2 must be positive");
}

double AdiabaticConfig::mass_scale() const {
    const double s = 2.0 * C2;
    return mass_law == MassLaw::Linear ? s : s * s * s;
}

double adiabatic_w(double q, const ClassicalHamiltonian& H) {
    require_oscillator(H);
    const double w = 1.0 + H.U(q, 2) / (H.m * H.omega * H.omega);
    if (!(w > kBreakdownThreshold)) {
        std::ostringstream os;
        os.imbue(std::locale::classic());
        os.precision(17);
        os << "adiabatic breakdown: 1 + U''/(m omega^2) = " << w << " at q = " << q;
        throw AdiabaticBreakdown(os.str(), q);
    }
    return w;
}

double g0_moments(double q, int n, int a, const AdiabaticConfig& cfg, const ClassicalHamiltonian& H) {
    cfg.validate();
    if (n < 0 || a < 0 || a > n) throw std::out_of_range("g0_moments index");
    const double w = adiabatic_w(q, H);
    if (n % 2 || a % 2) return 0.0;
    const double vac = fact(n - a) * fact(a) / (std::pow(2.0, n) * fact((n - a) / 2) * fact(a / 2));
    const double scale = n == 2 ? cfg.force_scale() : 1.0;
    return scale * vac * std::pow(w, (2.0 * a - n) / 4.0);
}

double g1_correction(double qdot, double q, const AdiabaticConfig& cfg, const ClassicalHamiltonian& H) {
    cfg.validate();
    const Jet f = power_jet(w_jet(q, H), -0.5);
    return cfg.force_scale() * 0.5 * f.f1 * qdot / (2.0 * H.omega);
}

double g2_correction(double q, double qdot, double qddot, const AdiabaticConfig& cfg,
                     const ClassicalHamiltonian& H) {
    cfg.validate();
    const WJet j = w_jet(q, H);
    // Vacuum G0 = w^{-1/2}/2, so G0^{1/2} = w^{-1/4}/sqrt(2).
    const double G0 = 0.5 / std::sqrt(j.w);
    const Jet r = power_jet(j, -0.25);
    const double ddt2 = (r.f2 * qdot * qdot + r.f1 * qddot) / std::sqrt(2.0);
    const double vac = -2.0 / (H.omega * H.omega) * std::pow(G0, 2.5) * ddt2;
    return cfg.mass_scale() * vac;
}

double g2_correction_expanded(double q, double qdot, double qddot, const AdiabaticConfig& cfg,
                              const ClassicalHamiltonian& H) {
    cfg.validate();
    const double w = adiabatic_w(q, H);
    const double m = H.m, om = H.omega;
    const double U3 = H.U(q, 3), U4 = H.U(q, 4);
    const double t = U3 * qdot / (4.0 * m * om * om);
    const double vac =
        std::pow(w, -3.5) / (4.0 * om * om) * (w * (U3 * qddot + U4 * qdot * qdot) / (4.0 * m * om * om) - 5.0 * t * t);
    return cfg.mass_scale() * vac;
}

EffectiveCoefficients effective_coefficients(double q, double hbar, const AdiabaticConfig& cfg,
                                             const ClassicalHamiltonian& H) {
    cfg.validate();
    const double w = adiabatic_w(q, H);
    const double m = H.m, om = H.omega;
    EffectiveCoefficients c;
    c.w = w;
    c.m_eff = m;
    c.F = m * om * om * q + H.U(q, 1);
    if (cfg.k < 1) return c;
    const double U3 = H.U(q, 3), U4 = H.U(q, 4);
    c.F += cfg.force_scale() * hbar * U3 / (4.0 * m * om * std::sqrt(w));
    if (cfg.e < 2) return c;
    const double ms = cfg.mass_scale();
    c.m_eff += ms * hbar * U3 * U3 / (32.0 * m * m * std::pow(om, 5) * std::pow(w, 2.5));
    c.B = ms * hbar * (4.0 * m * om * om * U3 * U4 * w - 5.0 * U3 * U3 * U3) /
          (128.0 * m * m * m * std::pow(om, 7) * std::pow(w, 3.5));
    return c;
}

double effective_acceleration(double q, double qdot, double hbar, const AdiabaticConfig& cfg,
                              const ClassicalHamiltonian& H) {
    const auto c = effective_coefficients(q, hbar, cfg, H);
    return -(c.B * qdot * qdot + c.F) / c.m_eff;
}

AdiabaticMoments adiabatic_moments(double q, double qdot, double qddot, const AdiabaticConfig& cfg,
                                   const ClassicalHamiltonian& H) {
    cfg.validate();
    const WJet j = w_jet(q, H);
    const double s = cfg.force_scale(), om = H.omega;
    const Jet a0 = power_jet(j, -0.5), a2 = power_jet(j, 0.5);
    AdiabaticMoments M;
    M.G0[0] = 0.5 * s * a0.f;
    M.G0[2] = 0.5 * s * a2.f;
    M.dG0[0] = 0.5 * s * a0.f1 * qdot;
    M.dG0[2] = 0.5 * s * a2.f1 * qdot;
    const double ddG0 = 0.5 * s * (a0.f2 * qdot * qdot + a0.f1 * qddot);
    if (cfg.e >= 1) {
        M.G1[1] = M.dG0[0] / (2.0 * om);
        M.dG1[1] = ddG0 / (2.0 * om);
    }
    if (cfg.e >= 2) {
        M.G2[0] = g2_correction(q, qdot, qddot, cfg, H);
        M.G2[2] = j.w * M.G2[0] + ddG0 / (2.0 * om * om);
    }
    return M;
}

double adiabatic_recursion_residual(const AdiabaticMoments& M, int e, double q, const ClassicalHamiltonian& H) {
    if (e < 1 || e > 2) throw std::out_of_range("recursion residual for e = 1, 2");
    const double w = adiabatic_w(q, H), om = H.omega;
    const double* G = e == 1 ? M.G1 : M.G2;
    const double* dprev = e == 1 ? M.dG0 : M.dG1;
    double res = 0.0;
    for (int a = 0; a <= 2; ++a) {
        const double up = a < 2 ? G[a + 1] : 0.0, down = a > 0 ? G[a - 1] : 0.0;
        const double L = om * ((2 - a) * up - a * w * down);
        res = std::max(res, std::abs(dprev[a] - L));
    }
    return res;
}

double adiabatic_constraint_sum(double q, double qdot, int n, const AdiabaticConfig& cfg, const ClassicalHamiltonian& H) {
    if (n % 2) return 0.0;
    const WJet j = w_jet(q, H);
    double s = 0.0;
    for (int a = 0; a <= n; a += 2) {
        const double ex = (2.0 * a - n) / 4.0;
        const double dG = g0_moments(q, n, a, cfg, H) / std::pow(j.w, ex) * ex * std::pow(j.w, ex - 1.0) * j.w1 * qdot;
        s += binom(n / 2, a / 2) * std::pow(j.w, (n - a) / 2.0) * dG;
    }
    return s;
}

AdiabaticTrajectory solve_effective(const AdiabaticConfig& cfg, const ClassicalHamiltonian& H, double hbar,
                                    double q0, double qdot0, const std::vector<double>& times,
                                    const IntegratorOptions& opt) {
    cfg.validate();
    require_oscillator(H);
    auto f = [&](const std::vector<double>& y, std::vector<double>& dy, double) {
        dy.resize(2);
        dy[0] = y[1];
        dy[1] = effective_acceleration(y[0], y[1], hbar, cfg, H);
    };
    OdeSolution sol = solve_ode(f, {q0, qdot0}, times, opt);
    AdiabaticTrajectory tr;
    tr.t = sol.t;
    tr.stats = sol.stats;
    tr.complete = sol.complete;
    tr.stop_reason = sol.error;
    tr.stop_time = sol.stop_time;
    tr.breakdown = !sol.complete && sol.error.find("adiabatic breakdown") != std::string::npos;
    const double hb = cfg.k >= 1 ? hbar : 0.0;
    for (auto& y : sol.y) {
        tr.q.push_back(y[0]);
        tr.qdot.push_back(y[1]);
        const double acc = effective_acceleration(y[0], y[1], hbar, cfg, H);
        const auto M = adiabatic_moments(y[0], y[1], acc, cfg, H);
        tr.G02.push_back(from_dimensionless(M.total(0), 0, 2, hb, H.m, H.omega));
        tr.G12.push_back(from_dimensionless(M.total(1), 1, 2, hb, H.m, H.omega));
        tr.G22.push_back(from_dimensionless(M.total(2), 2, 2, hb, H.m, H.omega));
    }
    if (!sol.complete && !tr.breakdown) throw Error(static_cast<ErrorKind>(sol.error_code), sol.error);
    return tr;
}

}  // namespace momentflow
