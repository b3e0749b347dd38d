// Acceptance criteria A1-A10. One line per criterion; exit status 1 when any fails.

#include "momentflow/adiabatic.hpp"
#include "momentflow/compare.hpp"
#include "momentflow/cosmology.hpp"
#include "momentflow/dynamics.hpp"
#include "momentflow/moment_algebra.hpp"
#include "momentflow/oracle.hpp"
#include "momentflow/order_check.hpp"
#include "momentflow/states.hpp"
#include "momentflow/uncertainty.hpp"

#include <boost/math/differentiation/autodiff.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace momentflow;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string num(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

Outcome a1_brackets() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst_abs = 0.0, worst_rel = 0.0;
    int pairs = 0, failures = 0;
    for (int dof = 1; dof <= 2; ++dof) {
        const int nmax = dof == 1 ? 4 : 3;
        std::vector<MomentIndex> idx;
        for (int n = 2; n <= nmax; ++n)
            for (auto& i : indices_of_order(n, dof)) idx.push_back(i);
        std::vector<std::pair<MomentIndex, MomentIndex>> P;
        std::vector<MomentPolynomial> polys;
        for (auto& a : idx)
            for (auto& b : idx) {
                P.emplace_back(a, b);
                polys.push_back(bracket_moments(a, b));
            }
        const FockBasis basis{60, 1.0, 1.0, 1.0};
        for (int s = 0; s < 20; ++s) {
            const WaveVector w = random_state(basis, 1000 + 31 * s + dof, dof);
            const WeylExpectations X(w, 2 * nmax);
            SemiclassicalState st;
            st.hbar = basis.hbar;
            st.x = X.mean();
            st.n_max = 2 * nmax - 2;
            for (int n = 2; n <= 2 * nmax - 2; ++n)
                for (auto& i : indices_of_order(n, dof)) st.moments[i] = X.expect(i.q, i.p, true);
            for (std::size_t k = 0; k < P.size(); ++k) {
                const double lhs = evaluate(polys[k], st);
                const double ref = bracket_oracle(P[k].first, P[k].second, X);
                const double ad = std::abs(lhs - ref), rd = ad / std::max(std::abs(ref), 1e-300);
                ++pairs;
                if (ad > 1e-10 && rd > 1e-8) {
                    ++failures;
                    worst_abs = std::max(worst_abs, ad);
                    worst_rel = std::max(worst_rel, rd);
                }
                if (ad <= 1e-10) continue;
                worst_rel = std::max(worst_rel, rd);
            }
        }
    }
    const double secs = seconds_since(t0);
    Outcome o;
    o.pass = failures == 0 && secs < 60.0;
    o.detail = std::to_string(pairs) + " pair evaluations, " + std::to_string(failures) +
               " outside abs 1e-10/rel 1e-8, worst rel beyond abs floor " + num(worst_rel) + ", " + num(secs) + " s";
    return o;
}

// ---------------------------------------------------------------------------

Outcome a2_harmonic() {
    const auto t0 = std::chrono::steady_clock::now();
    const double m = 1.0, om = 1.0, hbar = 1.0, q0 = 1.0, p0 = 0.5;
    const int nmax = 4;
    const auto H = ClassicalHamiltonian::harmonic(m, om);
    EomOptions eo;
    eo.n_max = nmax;
    const auto sys = generate_eom(expand_quantum_hamiltonian(H, nmax), eo);
    const auto s0 = coherent_state(q0, p0, hbar, m, om, nmax);
    const auto times = time_grid(0.0, 10.0 * 2.0 * M_PI / om, 401);
    IntegratorOptions opt;
    opt.abs_tol = 1e-13;
    opt.rel_tol = 1e-12;
    const Trajectory tr = integrate(sys, s0, times, opt);

    // Analytic moments: exp(theta M) A with A the values at theta = 0.
    double gerr = 0.0, xerr = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const auto cl = harmonic_classical(q0, p0, m, om, times[i]);
        xerr = std::max({xerr, std::abs(tr.states[i].x[0] - cl[0]), std::abs(tr.states[i].x[1] - cl[1])});
        const PolarPoint pp = harmonic_polar(cl[0], cl[1], m, om);
        for (int n = 2; n <= nmax; ++n) {
            HarmonicModeConstants A;
            A.n = n;
            // The coherent state is invariant: its dimensionless values are the constants at theta = 0.
            for (int a = 0; a <= n; ++a) A.amplitudes.push_back(coherent_moment_tilde(a, n));
            const PolarPoint p0p = harmonic_polar(q0, p0, m, om);
            const auto g = harmonic_analytic(A, pp.theta - p0p.theta);
            for (int a = 0; a <= n; ++a) {
                const double ref = from_dimensionless(g[a], a, n, hbar, m, om);
                gerr = std::max(gerr, std::abs(tr.states[i].get(a, n) - ref));
            }
        }
    }
    // Oracle on a coarser grid.
    const FockBasis b{60, m, om, hbar};
    const auto otimes = time_grid(0.0, 10.0 * 2.0 * M_PI / om, 41);
    const Trajectory tro = integrate(sys, s0, otimes, opt);
    const OracleTrajectory orc = oracle_trajectory(H, coherent_at(q0, p0, b), otimes, nmax);
    double oerr = 0.0;
    for (std::size_t i = 0; i < otimes.size(); ++i) {
        oerr = std::max({oerr, std::abs(tro.states[i].x[0] - orc.states[i].x[0]),
                         std::abs(tro.states[i].x[1] - orc.states[i].x[1])});
        for (int n = 2; n <= nmax; ++n)
            for (int a = 0; a <= n; ++a)
                oerr = std::max(oerr, std::abs(tro.states[i].get(a, n) - orc.states[i].get(a, n)));
    }
    const double secs = seconds_since(t0);
    Outcome o;
    o.pass = gerr <= 1e-8 && xerr <= 1e-6 && oerr <= 1e-8 && secs < 10.0;
    o.detail = "moments " + num(gerr) + " (<=1e-8), q,p " + num(xerr) + " (<=1e-6), oracle " + num(oerr) +
               " (<=1e-8), " + num(secs) + " s";
    return o;
}

// ---------------------------------------------------------------------------

Outcome a3_free() {
    const double m = 1.0, hbar = 1.0;
    const auto H = ClassicalHamiltonian::free_particle(m);
    EomOptions eo;
    eo.n_max = 2;
    const auto sys = generate_eom(expand_quantum_hamiltonian(H, 2), eo);
    // Coherent state of the unit oscillator, centred at (0.3, 0.8).
    const auto s0 = coherent_state(0.3, 0.8, hbar, m, 1.0, 2);
    const auto times = time_grid(0.0, 5.0, 101);
    const Trajectory tr = integrate(sys, s0, times);
    double perr = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const auto ref = free_particle_spread(s0.get(0, 2), s0.get(1, 2), s0.get(2, 2), m, times[i]);
        perr = std::max(perr, std::abs(tr.states[i].get(0, 2) - ref[0]));
    }
    const FockBasis b{200, m, 1.0, hbar};
    const auto ot = time_grid(0.0, 1.0, 21);
    const Trajectory tro = integrate(sys, s0, ot);
    const OracleTrajectory orc = oracle_trajectory(H, coherent_at(0.3, 0.8, b), ot, 2);
    double oerr = 0.0;
    for (std::size_t i = 0; i < ot.size(); ++i) oerr = std::max(oerr, std::abs(tro.states[i].get(0, 2) - orc.states[i].get(0, 2)));
    Outcome o;
    o.pass = perr <= 1e-8 && oerr <= 1e-4;
    o.detail = "G^{0,2} vs closed form " + num(perr) + " (<=1e-8), vs D=200 oracle " + num(oerr) + " (<=1e-4)";
    return o;
}

// ---------------------------------------------------------------------------

Outcome a4_quartic() {
    RunConfig c;
    c.model = "quartic";
    c.params.m = c.params.omega = c.params.hbar = 1.0;
    c.params.delta = 0.1;
    c.initial.type = "coherent";
    c.initial.q = 1.0;
    c.initial.p = 0.0;
    c.oracle.D = 120;
    c.n_max = 3;
    c.time = {0.0, 4.0 * M_PI, 401};
    const CompareReport ra = run_compare(c);
    c.time = {0.0, 2.0 * M_PI, 201};
    const CompareReport rb = run_compare(c);
    double gerr = 0.0;
    for (int a = 0; a <= 2; ++a) gerr = std::max(gerr, rb.get(moment_column(a, 2)).max);
    Outcome o;
    const bool pa = ra.adiabatic_q.max <= 2e-2 && ra.improvement_ratio <= 0.5;
    const bool pb = gerr <= 5e-2;
    o.pass = pa && pb;
    o.detail = "(a) adiabatic <q> " + num(ra.adiabatic_q.max) + " (<=2e-2), classical " + num(ra.classical_q.max) +
               ", ratio " + num(ra.improvement_ratio) + " (<=0.5); (b) G^{a,2} " + num(gerr) + " (<=5e-2)";
    return o;
}

// ---------------------------------------------------------------------------

// Lagrangian terms of the effective action with the vacuum normalization.
template <class T>
T effac_mass(const T& q, double m, double om, double hbar, double delta) {
    const T w = 1.0 + delta * q * q / (2.0 * m * om * om);
    const T U3 = delta * q;
    return m + hbar * U3 * U3 / (32.0 * m * m * std::pow(om, 5) * pow(w, 2.5));
}

template <class T>
T effac_potential(const T& q, double m, double om, double hbar, double delta) {
    const T w = 1.0 + delta * q * q / (2.0 * m * om * om);
    return 0.5 * m * om * om * q * q + delta * q * q * q * q / 24.0 + 0.5 * hbar * om * sqrt(w);
}

Outcome a5_effective_action() {
    using namespace boost::math::differentiation;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-1.5, 1.5), Pm(0.5, 2.0), Pd(0.01, 0.5), Pv(-1.0, 1.0);
    double el = 0.0, constraint = 0.0, g2 = 0.0;
    AdiabaticConfig cfg;  // C_2 = 1/2, linear law
    for (int i = 0; i < 20; ++i) {
        const double m = Pm(rng), om = Pm(rng), hbar = Pd(rng), delta = Pd(rng);
        const double q = U(rng), v = Pv(rng), acc = Pv(rng);
        const auto H = ClassicalHamiltonian::quartic(m, om, delta);
        const auto x = make_fvar<double, 1>(q);
        const auto M = effac_mass(x, m, om, hbar, delta);
        const auto V = effac_potential(x, m, om, hbar, delta);
        // d/dt(M q') - dL/dq = M q'' + M'/2 q'^2 + V'
        const double el_ref = M.derivative(0) * acc + 0.5 * M.derivative(1) * v * v + V.derivative(1);
        const auto c = effective_coefficients(q, hbar, cfg, H);
        const double el_ours = c.m_eff * acc + c.B * v * v + c.F;
        el = std::max(el, std::abs(el_ours - el_ref) / std::max(1.0, std::abs(el_ref)));
        for (int n = 2; n <= 8; n += 2) constraint = std::max(constraint, std::abs(adiabatic_constraint_sum(q, v, n, cfg, H)));
        const double a = g2_correction(q, v, acc, cfg, H), b = g2_correction_expanded(q, v, acc, cfg, H);
        g2 = std::max(g2, std::abs(a - b) / std::max(1.0, std::abs(b)));
    }
    Outcome o;
    o.pass = el <= 1e-12 && constraint <= 1e-12 && g2 <= 1e-12;
    o.detail = "Euler-Lagrange " + num(el) + ", constraint identity " + num(constraint) + ", compact vs expanded G2 " +
               num(g2) + " (all <=1e-12)";
    return o;
}

// ---------------------------------------------------------------------------

Outcome a6_uncertainty() {
    double sat = 0.0;
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> G(-0.8, 0.8);
    for (int i = 0; i < 10; ++i) {
        const double hbar = 0.5 + 0.1 * i;
        sat = std::max(sat, std::abs(check_uncertainty_order2(coherent_state(G(rng), G(rng), hbar, 1.3, 0.7, 2))));
        Eigen::Matrix2d g;
        g << G(rng), G(rng), 0.0, G(rng);
        g(1, 0) = g(0, 1);
        sat = std::max(sat, std::abs(check_uncertainty_order2(
                                squeezed_moments(SqueezeMatrix(g), Eigen::Vector2d(G(rng), G(rng)), 2, hbar))));
    }
    double worst = std::numeric_limits<double>::infinity();
    const FockBasis b{24, 1.0, 1.0, 1.0};
    std::uniform_real_distribution<double> A(-0.5, 0.5);
    for (int s = 0; s < 50; ++s) {
        const WaveVector w = random_state(b, 600 + s);
        const CharacteristicProvider prov = oracle_provider(w);
        for (int k = 0; k < 10; ++k) {
            Eigen::VectorXd al(2), be(2);
            al << A(rng), A(rng);
            be << A(rng), A(rng);
            worst = std::min(worst, check_uncertainty_generating(prov, al, be, b.hbar));
        }
    }
    Outcome o;
    o.pass = sat <= 1e-12 && worst >= -1e-10;
    o.detail = "saturation " + num(sat) + " (<=1e-12), min generating residual " + num(worst) + " (>=-1e-10)";
    return o;
}

// ---------------------------------------------------------------------------

Outcome a7_cosmology() {
    CosmologyParams P;
    P.hbar = 1e-2;
    double spread = 0.0;
    double fc = 0.0, fp = 0.0;
    for (double p : {1e3, 1e4, 1e5}) {
        const double c = cosmology_constraint_c(P, p);
        const CosmologyComparison C = cosmology_compare(P, c, p);
        spread = std::max({spread, C.spread_c / std::abs(C.factor_c), C.spread_p / std::abs(C.factor_p)});
        fc = C.factor_c;
        fp = C.factor_p;
    }
    // Small-correction choice on the constraint surface.
    std::vector<double> ps, r0, r1, r2;
    for (double p = 1e5; p <= 1e7 * 1.0001; p *= std::sqrt(10.0)) {
        CosmologyParams Q = P;
        const double c = cosmology_constraint_c(Q, p);
        Q.g32 = 0.0;
        Q.g3 = 1.0;
        Q.g0 = cosmology_suitable_g0(Q, c, p);
        const auto r = cosmology_moment_rates_direct(Q, c, p);
        ps.push_back(p);
        r0.push_back(std::abs(r[0]));
        r1.push_back(std::abs(r[1]));
        r2.push_back(std::abs(r[2]));
    }
    const double s22 = loglog_slope(ps, r2);
    Outcome o;
    o.pass = spread <= 1e-10 && std::abs(s22 - 1.25) <= 0.05;
    o.detail = "per-term ratio spread " + num(spread) + " (<=1e-10), global factors c " + num(fc) + " p " + num(fp) +
               " (direct/closed form), slope dG22/dt vs p " + num(s22) + " (1.25 +- 0.05; G02 " +
               num(loglog_slope(ps, r0)) + ", G12 " + num(loglog_slope(ps, r1)) + ")";
    return o;
}

// ---------------------------------------------------------------------------

Outcome a8_squeezed() {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> G(-0.6, 0.6), X(-0.5, 0.5);
    double merr = 0.0, terr = 0.0, perr = 0.0;
    const FockBasis b{90, 1.0, 1.0, 1.0};
    for (int i = 0; i < 10; ++i) {
        Eigen::Matrix2d g;
        g << G(rng), G(rng), 0.0, G(rng);
        g(1, 0) = g(0, 1);
        const Eigen::Vector2d x0(X(rng), X(rng));
        const auto sm = squeezed_moments(SqueezeMatrix(g), x0, 4, b.hbar);
        const auto om = moments_of(squeezed(g, x0, b), 4);
        for (int n = 2; n <= 4; ++n)
            for (int a = 0; a <= n; ++a) merr = std::max(merr, std::abs(sm.get(a, n) - om.get(a, n)));
        const Eigen::Matrix2d C = squeezed_covariance(SqueezeMatrix(g), b.hbar);
        terr = std::max(terr, std::abs(rho_trace(x0, C, b.hbar) - 1.0));
        if (i < 3) perr = std::max(perr, std::abs(rho_purity(x0, C, b.hbar) - 1.0));
    }
    Outcome o;
    o.pass = merr <= 1e-8 && terr <= 1e-6 && perr <= 1e-6;
    o.detail = "moments vs oracle " + num(merr) + " (<=1e-8), trace " + num(terr) + " (<=1e-6), purity " + num(perr) +
               " (<=1e-6)";
    return o;
}

// ---------------------------------------------------------------------------

Outcome a9_decoupling() {
    int checked = 0, violations = 0;
    for (const auto& H : {ClassicalHamiltonian::harmonic(1.0, 1.3), ClassicalHamiltonian::free_particle(0.7)})
        for (int nmax = 2; nmax <= 6; ++nmax)
            for (auto cl : {ClosurePolicy::Zero, ClosurePolicy::GaussianFactorize}) {
                EomOptions eo;
                eo.n_max = nmax;
                eo.closure = cl;
                const auto sys = generate_eom(expand_quantum_hamiltonian(H, nmax), eo);
                for (int k = 0; k < sys.size(); ++k)
                    for (int j = 2; j < sys.size(); ++j) {
                        ++checked;
                        const int nk = k < 2 ? 1 : sys.index_of_slot(k).order();
                        const int nj = sys.index_of_slot(j).order();
                        if (nk != nj && sys.depends_on(k, j)) ++violations;
                    }
            }
    Outcome o;
    o.pass = violations == 0;
    o.detail = std::to_string(checked) + " couplings checked, " + std::to_string(violations) +
               " cross-order or back-reaction terms";
    return o;
}

// ---------------------------------------------------------------------------

Outcome a10_order() {
    OrderCheckOptions oq;
    oq.embedding = Embedding::Adiabatic;
    oq.hbars = {1e-3, 3e-3, 1e-2, 3e-2, 1e-1};
    const auto rq = order_check(ClassicalHamiltonian::quartic(1.0, 1.0, 0.1), oq);
    OrderCheckOptions oh;
    oh.embedding = Embedding::Coherent;
    oh.hbars = oq.hbars;
    const auto rh = order_check(ClassicalHamiltonian::harmonic(1.0, 1.0), oh);
    Outcome o;
    o.pass = !rq.exact && std::abs(rq.slope - 2.0) <= 0.2 && rh.exact && rh.verdict == "exact";
    o.detail = "quartic adiabatic slope " + num(rq.slope) + " (2.0 +- 0.2), harmonic coherent '" + rh.verdict + "'";
    return o;
}

}  // namespace

int main() {
    struct Item {
        const char* id;
        std::function<Outcome()> run;
    };
    const std::vector<Item> items{{"A1", a1_brackets},   {"A2", a2_harmonic},    {"A3", a3_free},
                                  {"A4", a4_quartic},    {"A5", a5_effective_action}, {"A6", a6_uncertainty},
                                  {"A7", a7_cosmology},  {"A8", a8_squeezed},    {"A9", a9_decoupling},
                                  {"A10", a10_order}};
    int failed = 0;
    for (const auto& it : items) {
        Outcome o;
        try {
            o = it.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        if (!o.pass) ++failed;
        std::cout << it.id << ' ' << (o.pass ? "PASS" : "FAIL") << ' ' << o.detail << std::endl;
    }
    std::cout << (failed ? "acceptance: " + std::to_string(failed) + " criteria failed" : std::string("acceptance: all passed"))
              << std::endl;
    return failed ? 1 : 0;
}
