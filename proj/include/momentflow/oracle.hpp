#pragma once

// Exact quantum mechanics in a truncated harmonic-oscillator (Fock) basis.
//
// Matrix elements of Weyl-ordered products are computed in a basis extended
// by the word length and then cropped, so for states supported on the D
// retained levels every expectation value below is exact (no truncation).

#include "momentflow/hamiltonian.hpp"
#include "momentflow/uncertainty.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace momentflow {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

constexpr int kWeylCap = 8;

struct FockBasis {
    int D = 60;
    double m = 1.0;
    double omega = 1.0;
    double hbar = 1.0;

    double q_scale() const;  // sqrt(hbar / (2 m omega))
    double p_scale() const;  // sqrt(hbar m omega / 2)
};

struct FockOperator {
    CMatrix M;
    FockBasis basis;
};

struct FockOps {
    FockOperator q, p;
};

// q = q_scale (a + a^dag), p = i p_scale (a^dag - a). Requires D >= 8.
FockOps fock_ops(int D, double m, double omega, double hbar);
FockOps fock_ops(const FockBasis& b);

// Non-empty when D is small for moments of order n (D < 10 n).
std::string capacity_warning(int D, int n);

// Weyl[q^j p^k] cropped to D x D. j + k <= cap.
FockOperator weyl_op(int j, int k, const FockBasis& b, int cap = kWeylCap);
FockOperator weyl_op(int j, int k, const FockOps& ops, int cap = kWeylCap);

// Oscillator-family Hamiltonian with polynomial U; cosmology and callable
// potentials are outside oracle coverage (ConfigError).
FockOperator hamiltonian_matrix(const ClassicalHamiltonian& H, const FockBasis& b);

class Propagator {
public:
    explicit Propagator(const FockOperator& H);
    CVector evolve(const CVector& psi0, double t) const;
    const Eigen::VectorXd& energies() const { return E_; }

private:
    double hbar_;
    Eigen::VectorXd E_;
    CMatrix V_;
};

CVector evolve(const FockOperator& H, const CVector& psi0, double t);

// A wavefunction for one (psi of length D) or two (psi of length D*D,
// index n1 * D + n2) degrees of freedom.
struct WaveVector {
    CVector psi;
    FockBasis basis;
    int dof = 1;

    double norm() const { return psi.norm(); }
};

// Expectation values of Weyl products on one state. Vectors S psi for the sum
// S of all words are memoized per power tuple, both raw and centered on the
// state's expectation values.
class WeylExpectations {
public:
    explicit WeylExpectations(const WaveVector& w, int cap = kWeylCap);

    int dof() const { return dof_; }
    const std::vector<double>& mean() const { return mean_; }  // (q_1, p_1, ...)
    // <Weyl[prod_f q_f^{q[f]} p_f^{p[f]}]>, raw or centered.
    double expect(const std::vector<int>& q, const std::vector<int>& p, bool centered) const;
    // <[A, B]> / (i hbar) for raw Weyl monomials A, B.
    double commutator(const std::vector<int>& qa, const std::vector<int>& pa, const std::vector<int>& qb,
                      const std::vector<int>& pb) const;

private:
    using Key = std::vector<int>;  // (q_1, p_1, q_2, p_2, ...)
    const CMatrix& vec(const Key& k, bool centered) const;
    CMatrix apply(const CMatrix& v, int f, bool is_p, bool centered) const;

    int dof_, De_, cap_;
    double qs_, ps_, hbar_;
    CMatrix psi_;
    std::vector<double> mean_;
    mutable std::map<Key, CMatrix> raw_, cen_;
};

SemiclassicalState moments_of(const WaveVector& w, int up_to_n);

// {G^{i1}, G^{i2}} on the state, from <[F, K]>/(i hbar) of the Weyl monomials
// and the chain rule over the expectation values the moments depend on.
// Order 1 indices denote coordinates: (1,0) is q, (0,1) is p.
double bracket_oracle(const MomentIndex& i1, const MomentIndex& i2, const WaveVector& w);
double bracket_oracle(const MomentIndex& i1, const MomentIndex& i2, const WeylExpectations& X);

// Ground state in the basis.
WaveVector ground_state(const FockBasis& b);
WaveVector number_state(int n, const FockBasis& b);
// |alpha> = exp(alpha a^dag - conj(alpha) a)|0>; tail norm above D must be < 1e-10.
WaveVector coherent(Complex alpha, const FockBasis& b);
// Coherent state centered at (q, p).
WaveVector coherent_at(double q, double p, const FockBasis& b);
Complex alpha_of(double q, double p, const FockBasis& b);

// exp((i/2hbar) g_ij (x - x0)^i (x - x0)^j) D(x0)|0> with x = (q, p) and
// D(x0) = exp((i/hbar)(p0 q - q0 p)).
WaveVector squeezed(const Eigen::Matrix2d& g, const Eigen::Vector2d& x0, const FockBasis& b);

// Normalized random complex coefficients on the lowest D/3 levels (per
// degree of freedom), reproducible from the seed.
WaveVector random_state(const FockBasis& b, std::uint64_t seed, int dof = 1);

// D(al) = <exp(al_i (x^i - <x^i>))> from an eigendecomposition of al.x in a
// basis enlarged by `extra` levels. One degree of freedom.
CharacteristicProvider oracle_provider(const WaveVector& w, int extra = 60);

// Largest component magnitude above level D - guard (truncation monitor).
double tail_weight(const CVector& psi, int guard = 10);

// ---------------------------------------------------------------------------
// Hamburger reconstruction (dimensionless q).

// Physicists' Hermite coefficients: H_n(q) = sum_l h[n][l] q^l.
std::vector<std::vector<double>> hermite_coefficients(int order);

// |Psi(q)|^2 = e^{-q^2} sum_n c_n H_n(q) / (2^n n! sqrt(pi)), c_n = sum_l h_{n,l} a_l,
// from a_l = <q^l>, l = 0..order.
std::function<double(double)> hamburger_density(const std::vector<double>& a, int order);

// d alpha / dq for Psi = |Psi| e^{i alpha}, from b_n = <q^n p> and a_l:
// Re b_n = hbar int |Psi|^2 q^n alpha'. Throws DomainError where the
// reconstructed density is not positive.
std::function<double(double)> hamburger_phase(const std::vector<Complex>& b, const std::vector<double>& a,
                                              int order, double hbar = 1.0);

}  // namespace momentflow
