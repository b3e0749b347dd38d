#include "momentflow/dynamics.hpp"

#include "momentflow/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <cstdio>

namespace momentflow {

namespace {

double fact(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

}  // namespace

std::vector<double> Trajectory::column(const std::string& name) const {
    std::vector<double> out;
    out.reserve(states.size());
    int k = -1;
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) k = static_cast<int>(i);
    if (k < 0) throw ConfigError("no column '" + name + "'");
    for (auto& s : states) {
        if (k < 2) {
            out.push_back(s.x.at(k));
            continue;
        }
        int a = 0, n = 0;
        if (std::sscanf(name.c_str(), "G_%d_%d", &a, &n) != 2) throw ConfigError("bad column '" + name + "'");
        out.push_back(s.get(a, n));
    }
    return out;
}

Trajectory integrate(const EquationSystem& sys, const SemiclassicalState& s0, const std::vector<double>& times,
                     const IntegratorOptions& opt, bool allow_partial) {
    const double margin = check_uncertainty_order2(s0);
    if (margin < -1e-12 * std::max(1.0, s0.hbar * s0.hbar))
        throw DomainError("initial state violates the order-2 uncertainty relation");
    const double hbar = s0.hbar;
    auto f = [&sys, hbar](const std::vector<double>& y, std::vector<double>& dy, double) { sys.rhs(y, dy, hbar); };
    OdeSolution sol = solve_ode(f, sys.pack(s0), times, opt);
    Trajectory tr;
    tr.names = sys.names();
    tr.t = sol.t;
    tr.stats = sol.stats;
    tr.complete = sol.complete;
    tr.error_code = sol.error_code;
    tr.stop_reason = sol.error;
    tr.stop_time = sol.stop_time;
    for (auto& y : sol.y) tr.states.push_back(sys.unpack(y, hbar));
    if (!sol.complete && !allow_partial) {
        if (sol.error.rfind("step size underflow", 0) == 0) throw StiffnessError(sol.error, sol.stop_time);
        throw Error(static_cast<ErrorKind>(sol.error_code), sol.error);
    }
    return tr;
}

double coherent_moment_tilde(int a, int n) {
    if (n % 2 || a % 2) return 0.0;
    return fact(a) * fact(n - a) / (std::pow(2.0, n) * fact(a / 2) * fact((n - a) / 2));
}

SemiclassicalState coherent_state(double q, double p, double hbar, double m, double omega, int n_max) {
    if (!(m > 0.0) || !(omega > 0.0)) throw DomainError("coherent state needs m > 0 and omega > 0");
    SemiclassicalState s;
    s.hbar = hbar;
    s.n_max = n_max;
    s.x = {q, p};
    for (int n = 2; n <= n_max; ++n)
        for (int a = 0; a <= n; ++a)
            s.set(a, n, from_dimensionless(coherent_moment_tilde(a, n), a, n, hbar, m, omega));
    return s;
}

std::array<double, 2> harmonic_classical(double q0, double p0, double m, double omega, double t) {
    const double c = std::cos(omega * t), s = std::sin(omega * t);
    return {q0 * c + p0 / (m * omega) * s, p0 * c - m * omega * q0 * s};
}

PolarPoint harmonic_polar(double q, double p, double m, double omega) {
    return {std::sqrt(p * p / m + m * omega * omega * q * q), std::atan2(m * omega * q, p)};
}

Eigen::MatrixXd harmonic_mode_matrix(int n) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (int a = 0; a <= n; ++a) {
        if (a < n) M(a, a + 1) = n - a;
        if (a > 0) M(a, a - 1) = -a;
    }
    return M;
}

std::vector<double> harmonic_analytic(const HarmonicModeConstants& A, double theta) {
    if (A.n < 2) throw std::out_of_range("harmonic_analytic needs n >= 2");
    if (static_cast<int>(A.amplitudes.size()) != A.n + 1) throw std::out_of_range("need n+1 amplitudes");
    const Eigen::MatrixXd E = (theta * harmonic_mode_matrix(A.n)).exp();
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(A.amplitudes.data(), A.n + 1);
    Eigen::VectorXd g = E * v;
    return std::vector<double>(g.data(), g.data() + g.size());
}

std::array<std::complex<double>, 3> harmonic_n2_modes(double A0, std::complex<double> A2,
                                                      std::complex<double> Am2, double theta) {
    const std::complex<double> I(0.0, 1.0);
    const auto ep = std::exp(2.0 * I * theta), em = std::exp(-2.0 * I * theta);
    return {A0 - ep * A2 - em * Am2, -I * ep * A2 + I * em * Am2, A0 + ep * A2 + em * Am2};
}

double harmonic_n2_margin(double A0, std::complex<double> A2, std::complex<double> Am2) {
    return (A0 * A0 - 4.0 * A2 * Am2).real() - 0.25;
}

double free_particle_moments(const std::vector<double>& c, double q, double p, int a, int n) {
    if (n < 2 || a < 0 || a > n) throw std::out_of_range("free_particle_moments index");
    double s = 0.0;
    for (int i = 0; i <= n - a && i < static_cast<int>(c.size()); ++i)
        s += c[i] * fact(n - a) / fact(n - a - i) * std::pow(q, n - a - i);
    return std::pow(p, a) * s;
}

std::vector<double> free_particle_fit(double q0, double p0, double G02, double G12, double G22) {
    if (p0 == 0.0) throw DomainError("free-particle constants need p != 0");
    const double c0 = G22 / (p0 * p0);
    const double c1 = G12 / p0 - c0 * q0;
    const double c2 = 0.5 * (G02 - c0 * q0 * q0 - 2.0 * c1 * q0);
    return {c0, c1, c2};
}

double free_particle_margin(const std::vector<double>& c, double p, double hbar) {
    return 2.0 * c.at(0) * c.at(2) - c.at(1) * c.at(1) - hbar * hbar / (4.0 * p * p);
}

std::array<double, 3> free_particle_spread(double G02, double G12, double G22, double m, double t) {
    return {G02 + 2.0 * G12 * t / m + G22 * t * t / (m * m), G12 + G22 * t / m, G22};
}

}  // namespace momentflow
