#include "momentflow/states.hpp"

#include "momentflow/adiabatic.hpp"
#include "momentflow/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace momentflow {

namespace {

double double_factorial(int n) {
    double r = 1.0;
    for (int i = n; i > 1; i -= 2) r *= i;
    return r;
}

double fact(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

double binom(int n, int k) { return fact(n) / (fact(k) * fact(n - k)); }

// Sum over pairings of nq q-slots and np p-slots.
double isserlis(const Eigen::Matrix2d& S, int nq, int np) {
    if ((nq + np) % 2) return 0.0;
    double sum = 0.0;
    for (int l = 0; l <= std::min(nq, np); ++l) {
        if ((nq - l) % 2 || (np - l) % 2) continue;
        const double count =
            binom(nq, l) * binom(np, l) * fact(l) * double_factorial(nq - l - 1) * double_factorial(np - l - 1);
        sum += count * std::pow(S(0, 0), (nq - l) / 2) * std::pow(S(1, 1), (np - l) / 2) * std::pow(S(0, 1), l);
    }
    return sum;
}

int g_coordinate(int a, int b) { return a == b ? 2 + 2 * a : 3; }

}  // namespace

Eigen::Matrix2d epsilon2() {
    Eigen::Matrix2d e;
    e << 0.0, 1.0, -1.0, 0.0;
    return e;
}

SqueezeMatrix::SqueezeMatrix(const Eigen::Matrix2d& m) : g(m) {
    if (std::abs(m(0, 1) - m(1, 0)) > 1e-12 * (1.0 + m.norm())) throw ConfigError("squeeze matrix must be symmetric");
    g(0, 1) = g(1, 0) = 0.5 * (m(0, 1) + m(1, 0));
}

Eigen::Matrix2d SqueezeMatrix::exp_g_eps() const {
    const Eigen::Matrix2d A = g * epsilon2();
    return A.exp();
}

Eigen::Matrix2d squeezed_covariance(const SqueezeMatrix& g, double hbar) {
    const Eigen::Matrix2d E = g.exp_g_eps();
    return 0.5 * hbar * E.transpose() * E;
}

double squeezed_moment(const SqueezeMatrix& g, int a, int n, double hbar) {
    if (n < 0 || a < 0 || a > n) throw std::out_of_range("squeezed_moment index");
    return isserlis(squeezed_covariance(g, hbar), n - a, a);
}

SemiclassicalState squeezed_moments(const SqueezeMatrix& g, const Eigen::Vector2d& x, int n_max, double hbar) {
    SemiclassicalState s;
    s.hbar = hbar;
    s.x = {x(0), x(1)};
    s.n_max = n_max;
    const Eigen::Matrix2d S = squeezed_covariance(g, hbar);
    for (int n = 2; n <= n_max; ++n)
        for (int a = 0; a <= n; ++a) s.set(a, n, isserlis(S, n - a, a));
    return s;
}

std::complex<double> rho_element(const Eigen::Vector2d& alpha, const Eigen::Vector2d& alpha_p,
                                 const Eigen::Vector2d& x, const Eigen::Matrix2d& G, double hbar) {
    // Evaluate one ordering and conjugate the other so rho is exactly Hermitian.
    const bool swap = alpha(0) > alpha_p(0) || (alpha(0) == alpha_p(0) && alpha(1) > alpha_p(1));
    if (swap) return std::conj(rho_element(alpha_p, alpha, x, G, hbar));
    if (!(hbar > 0.0)) throw DomainError("rho_element needs hbar > 0");
    const Eigen::Matrix2d A = G / hbar + 0.5 * Eigen::Matrix2d::Identity();
    const double det = A.determinant();
    if (!(det > 0.0)) throw DomainError("rho_element: degenerate covariance");
    const Eigen::Matrix2d eps = epsilon2();
    const Eigen::Matrix2d N = eps * (2.0 * G / hbar + Eigen::Matrix2d::Identity()).inverse() * eps;
    const Eigen::Vector2d d = alpha_p - alpha;
    const Eigen::Vector2d s = alpha_p + alpha - 2.0 * x;
    const Eigen::Vector2cd S = d.cast<std::complex<double>>() + std::complex<double>(0.0, 1.0) * (eps * s).cast<std::complex<double>>();
    const std::complex<double> quad = (S.transpose() * N.cast<std::complex<double>>() * S)(0, 0);
    const double phase = -d.dot(eps * (alpha_p + alpha)) / (4.0 * hbar);
    const std::complex<double> ex = -quad / (4.0 * hbar) + std::complex<double>(-d.squaredNorm() / (4.0 * hbar), phase);
    return std::exp(ex) / std::sqrt(det);
}

namespace {

// x + L u maps the unit lattice onto the principal axes of G + hbar/2.
Eigen::Matrix2d lattice_map(const Eigen::Matrix2d& G, double hbar) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(G + 0.5 * hbar * Eigen::Matrix2d::Identity());
    if (es.eigenvalues().minCoeff() <= 0.0) throw DomainError("covariance + hbar/2 is not positive");
    return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal();
}

}  // namespace

double rho_trace(const Eigen::Vector2d& x, const Eigen::Matrix2d& G, double hbar, int n, double width) {
    const Eigen::Matrix2d L = lattice_map(G, hbar);
    const double h = 2.0 * width / (n - 1);
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Eigen::Vector2d u(-width + i * h, -width + j * h);
            const Eigen::Vector2d a = x + L * u;
            sum += rho_element(a, a, x, G, hbar).real();
        }
    return sum * h * h * std::abs(L.determinant()) / (2.0 * M_PI * hbar);
}

double rho_purity(const Eigen::Vector2d& x, const Eigen::Matrix2d& G, double hbar, int n, double width) {
    const Eigen::Matrix2d L = lattice_map(G, hbar);
    const double h = 2.0 * width / (n - 1);
    std::vector<Eigen::Vector2d> pts;
    pts.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) pts.push_back(x + L * Eigen::Vector2d(-width + i * h, -width + j * h));
    double sum = 0.0;
    for (const auto& a : pts)
        for (const auto& b : pts) sum += std::norm(rho_element(a, b, x, G, hbar));
    const double cell = h * h * std::abs(L.determinant()) / (2.0 * M_PI * hbar);
    return sum * cell * cell;
}

PulledBackForm omega_pullback(const SqueezeMatrix& g, const Eigen::Matrix2d dg[2], double hbar) {
    PulledBackForm f;
    const Eigen::Matrix2d eps = epsilon2();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) f.W(i, j) = kOmegaClassicalFactor * eps(i, j);
    const Eigen::Matrix2d F = Eigen::Matrix2d::Identity() + g.exp_g_eps();
    const Eigen::Matrix2d A = F * F.transpose();
    const Eigen::Matrix2d B = F * eps * F.transpose();
    Eigen::Matrix<double, 5, 5> Wg = Eigen::Matrix<double, 5, 5>::Zero();
    const double pre = hbar / 32.0;
    for (int j1 = 0; j1 < 2; ++j1)
        for (int j2 = 0; j2 < 2; ++j2)
            for (int j3 = 0; j3 < 2; ++j3)
                for (int j4 = 0; j4 < 2; ++j4)
                    Wg(g_coordinate(j1, j3), g_coordinate(j2, j4)) += pre * A(j1, j2) * B(j3, j4);
    Wg = 0.5 * (Wg - Wg.transpose()).eval();
    f.W += Wg;

    Eigen::Matrix<double, 5, 2> J = Eigen::Matrix<double, 5, 2>::Zero();
    J(0, 0) = J(1, 1) = 1.0;
    for (int k = 0; k < 2; ++k) {
        J(2, k) = dg[k](0, 0);
        J(3, k) = 0.5 * (dg[k](0, 1) + dg[k](1, 0));
        J(4, k) = dg[k](1, 1);
    }
    const Eigen::Matrix<double, 5, 5> Wc = f.W - Wg;
    f.classical = 2.0 * (J.transpose() * Wc * J)(0, 1);
    f.correction = 2.0 * (J.transpose() * Wg * J)(0, 1);
    return f;
}

PulledBackForm omega_pullback(const std::function<Eigen::Matrix2d(const Eigen::Vector2d&)>& gfield,
                              const Eigen::Vector2d& x, double hbar, double step) {
    Eigen::Matrix2d dg[2];
    for (int k = 0; k < 2; ++k) {
        Eigen::Vector2d e = Eigen::Vector2d::Zero();
        e(k) = step;
        dg[k] = (gfield(x + e) - gfield(x - e)) / (2.0 * step);
    }
    return omega_pullback(SqueezeMatrix(gfield(x)), dg, hbar);
}

Eigen::Matrix2d adiabatic_squeeze(double q, const ClassicalHamiltonian& H) {
    const double w = adiabatic_w(q, H);
    Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
    g(0, 1) = g(1, 0) = 0.25 * std::log(w);
    return g;
}

Eigen::Matrix2d adiabatic_squeeze_dq(double q, const ClassicalHamiltonian& H) {
    const double w = adiabatic_w(q, H);
    const double w1 = H.U(q, 3) / (H.m * H.omega * H.omega);
    Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
    g(0, 1) = g(1, 0) = 0.25 * w1 / w;
    return g;
}

}  // namespace momentflow
