#pragma once

// Classical Hamiltonians, their quantum Hamiltonians
//   H_Q = sum_{n,a} 1/n! C(n,a) d^n H / dp^a dq^{n-a} G^{a,n}
// and the truncated moment equations of motion (one degree of freedom).

#include "momentflow/moment_algebra.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <string>
#include <vector>

namespace momentflow {

// U(q) with derivative access U^{(k)}(q).
struct Potential {
    std::function<double(double q, int k)> eval;
    int max_derivative = 64;
    // Polynomial potentials know their degree (-1 for U = 0).
    bool is_polynomial = false;
    int degree = -1;
    std::vector<double> coeffs;  // U = sum_k coeffs[k] q^k

    double operator()(double q, int k = 0) const;
    // True when U^{(k)} vanishes identically.
    bool derivative_vanishes(int k) const { return is_polynomial && k > degree; }

    static Potential zero();
    static Potential polynomial(std::vector<double> coeffs);
    // U = delta q^4 / 4!
    static Potential quartic(double delta);
    static Potential callable(std::function<double(double, int)> f, int max_derivative);
};

struct ClassicalHamiltonian {
    enum class Kind { Oscillator, Cosmology };
    Kind kind = Kind::Oscillator;

    // Oscillator family: H = p^2/2m + m w^2 q^2/2 + U(q).
    double m = 1.0;
    double omega = 1.0;
    Potential U = Potential::zero();

    // Cosmology: H = -3 c^2 sqrt(p) / (gamma^2 kappa) + E with {c,p} = gamma kappa / 3.
    double gamma = 1.0;
    double kappa = 1.0;
    double E = 1.0;

    static ClassicalHamiltonian harmonic(double m, double omega);
    static ClassicalHamiltonian free_particle(double m);
    static ClassicalHamiltonian quartic(double m, double omega, double delta);
    static ClassicalHamiltonian cosmology(double gamma, double kappa, double E);

    // d^{iq}/dq^{iq} d^{jp}/dp^{jp} H at (x0, x1); x = (q,p) or (c,p).
    double derivative(int iq, int jp, double x0, double x1) const;
    double value(double x0, double x1) const { return derivative(0, 0, x0, x1); }
    bool derivative_vanishes(int iq, int jp) const;
    // {x0, x1}
    double symplectic_scale() const;
    std::string name() const;
};

struct HamiltonianTerm {
    int a = 0;  // p-power of the moment
    int n = 0;  // order of the moment
    Rational weight;  // C(n,a)/n!
};

struct QuantumHamiltonian {
    ClassicalHamiltonian H;
    int n_max = 2;
    int dropped_order = 3;  // first order not represented
    std::vector<HamiltonianTerm> terms;

    double value(const SemiclassicalState& s) const;
    // Magnitude of the first dropped order evaluated with Gaussian factorization.
    double dropped_magnitude(const SemiclassicalState& s) const;
    std::string str() const;
};

QuantumHamiltonian expand_quantum_hamiltonian(const ClassicalHamiltonian& H, int n_max);

// Conversions G~ = hbar^{-n/2} (m w)^{n/2 - a} G.
double to_dimensionless(double G, int a, int n, double hbar, double m, double omega);
double from_dimensionless(double Gt, int a, int n, double hbar, double m, double omega);
SemiclassicalState to_dimensionless(const SemiclassicalState& s, double m, double omega);

// ---------------------------------------------------------------------------

enum class ClosurePolicy { Zero, GaussianFactorize };

ClosurePolicy parse_closure(const std::string& name);
std::string closure_name(ClosurePolicy p);

// Replacement for a moment above n_max: a polynomial in order-2 moments
// (Gaussian) or zero.
MomentPolynomial closure_apply(ClosurePolicy policy, const MomentIndex& idx);
double closure_value(ClosurePolicy policy, const MomentIndex& idx, const SemiclassicalState& s);

// One term of a right-hand side:
//   coeff * hbar^hbar_power * d^{dq}_q d^{dp}_p H(x) * prod state[slots]
struct RhsTerm {
    double coeff = 0.0;
    Rational exact;
    int hbar_power = 0;
    int dq = 0, dp = 0;
    std::vector<int> slots;
};

struct EomOptions {
    int n_max = -1;  // retained order, defaults to the Hamiltonian order
    ClosurePolicy closure = ClosurePolicy::Zero;
};

// y = (q, p, G^{0,2}, G^{1,2}, G^{2,2}, G^{0,3}, ...), dimensionful.
class EquationSystem {
public:
    EquationSystem() = default;

    const ClassicalHamiltonian& hamiltonian() const { return H_; }
    int n_max() const { return n_max_; }
    ClosurePolicy closure() const { return closure_; }
    int size() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<std::vector<RhsTerm>>& rhs_terms() const { return rhs_; }

    // Slot of G^{a,n} in y, or -1.
    int slot(int a, int n) const;
    MomentIndex index_of_slot(int k) const;

    void rhs(const std::vector<double>& y, std::vector<double>& dydt, double hbar) const;

    // Pack/unpack between state vectors and SemiclassicalState.
    std::vector<double> pack(const SemiclassicalState& s) const;
    SemiclassicalState unpack(const std::vector<double>& y, double hbar) const;

    std::string listing() const;
    nlohmann::json listing_json() const;

    // Equation for variable k depends on variable j.
    bool depends_on(int k, int j) const;

private:
    friend EquationSystem generate_eom(const QuantumHamiltonian&, const EomOptions&);
    ClassicalHamiltonian H_;
    int n_max_ = 2;
    ClosurePolicy closure_ = ClosurePolicy::Zero;
    std::vector<std::string> names_;
    std::vector<std::vector<RhsTerm>> rhs_;
};

EquationSystem generate_eom(const QuantumHamiltonian& HQ, const EomOptions& opt = {});

// CSV column names: t,q,p,G_0_2,...
std::string moment_column(int a, int n);

}  // namespace momentflow
