#pragma once

// Weyl-ordered central moments and their Poisson algebra.
//
// A moment G^{a_1..a_N}_{b_1..b_N} is the expectation value of the fully
// symmetrized product prod_f (q_f - <q_f>)^{a_f} (p_f - <p_f>)^{b_f}. Weyl
// ordering is the only ordering convention used anywhere in this library.
// For one degree of freedom we write G^{a,n}: p-power a, q-power n - a.

#include <boost/rational.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace momentflow {

using Rational = boost::rational<std::int64_t>;

struct MomentIndex {
    std::vector<int> q;  // q-power per degree of freedom
    std::vector<int> p;  // p-power per degree of freedom

    MomentIndex() = default;
    MomentIndex(std::vector<int> qpow, std::vector<int> ppow);

    // Single-DOF shorthand G^{a,n}.
    static MomentIndex single(int a, int n);

    int dof() const { return static_cast<int>(q.size()); }
    int order() const;
    // p-power of a single-DOF index.
    int a() const { return p.at(0); }

    std::string str() const;
};

bool operator<(const MomentIndex& l, const MomentIndex& r);
bool operator==(const MomentIndex& l, const MomentIndex& r);
inline bool operator!=(const MomentIndex& l, const MomentIndex& r) { return !(l == r); }

// All indices of a given total order for N degrees of freedom, canonical order.
std::vector<MomentIndex> indices_of_order(int n, int dof);

// Symplectic matrix eps^{ij} = {x^i, x^j} with x = (q_1, p_1, q_2, p_2, ...).
std::vector<std::vector<int>> symplectic_matrix(int dof);

// One term: coeff * hbar^hbar_power * prod_i (x^i)^{x_powers[i]} * prod G.
struct Monomial {
    int hbar_power = 0;
    std::vector<int> x_powers;
    std::vector<MomentIndex> factors;  // kept sorted
};

bool operator<(const Monomial& l, const Monomial& r);
bool operator==(const Monomial& l, const Monomial& r);

struct SemiclassicalState;

class MomentPolynomial {
public:
    explicit MomentPolynomial(int dof = 1) : dof_(dof) {}

    static MomentPolynomial constant(Rational c, int dof);
    static MomentPolynomial moment(const MomentIndex& i, Rational c = 1);
    static MomentPolynomial coordinate(int i, int dof, Rational c = 1);

    int dof() const { return dof_; }
    const std::map<Monomial, Rational>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    void add_term(Monomial m, Rational c);

    MomentPolynomial& operator+=(const MomentPolynomial& o);
    MomentPolynomial& operator-=(const MomentPolynomial& o);
    MomentPolynomial& operator*=(Rational c);

    // Largest moment order appearing in any factor.
    int max_moment_order() const;

    // hbar -> 0: keep only hbar^0 terms.
    MomentPolynomial classical_limit() const;

    // Deterministic text form; non-integer coefficients printed as num/den.
    std::string str() const;

private:
    int dof_;
    std::map<Monomial, Rational> terms_;
};

MomentPolynomial operator+(MomentPolynomial a, const MomentPolynomial& b);
MomentPolynomial operator-(MomentPolynomial a, const MomentPolynomial& b);
MomentPolynomial operator*(const MomentPolynomial& a, const MomentPolynomial& b);
MomentPolynomial operator*(MomentPolynomial a, Rational c);
bool operator==(const MomentPolynomial& a, const MomentPolynomial& b);

// Coefficient K_{r,s,{e}} of the closed bracket formula, taken literally.
// Sums over g_f with sum g_f = 2r+1-s inside the stated g_f range; empty
// ranges give 0. Throws std::out_of_range for r < 0, s outside [0, 2r+1],
// negative e_f or mismatched vector lengths.
Rational kk_coefficient(int r, int s, const std::vector<int>& e, const std::vector<int>& a,
                        const std::vector<int>& b, const std::vector<int>& c,
                        const std::vector<int>& d);

// {G^{i1}, G^{i2}} with term sets taken from the Taylor expansion of
//   {D(al), D(be)} = (2/hbar) sin(hbar/2 al x be) D(al+be) - (al x be) D(al) D(be).
// Requires order >= 2 on both sides.
MomentPolynomial bracket_moments(const MomentIndex& i1, const MomentIndex& i2);

// The same bracket assembled from kk_coefficient over the stated index
// ranges. Kept for cross-validation only; it disagrees with the oracle.
MomentPolynomial bracket_moments_closed_form(const MomentIndex& i1, const MomentIndex& i2);

// {x^i, G} = 0 and {x^i, x^j} = eps^{ij}.
MomentPolynomial bracket_mixed(int x_index, const MomentIndex& i);
MomentPolynomial bracket_coordinates(int i, int j, int dof);

// Leibniz extension to arbitrary polynomials.
MomentPolynomial bracket_general(const MomentPolynomial& P, const MomentPolynomial& Q);

struct SemiclassicalState {
    double hbar = 1.0;
    std::vector<double> x;  // (q_1, p_1, ..., q_N, p_N)
    std::map<MomentIndex, double> moments;
    int n_max = 2;

    int dof() const { return static_cast<int>(x.size() / 2); }
    // Order 0 -> 1, order 1 -> 0, otherwise looked up; throws if absent.
    double get(const MomentIndex& i) const;
    double get(int a, int n) const { return get(MomentIndex::single(a, n)); }
    void set(int a, int n, double v) { moments[MomentIndex::single(a, n)] = v; }
};

// Supplies a value for an index missing from the state (closure hook).
using MomentResolver = std::function<double(const MomentIndex&, const SemiclassicalState&)>;

double evaluate(const MomentPolynomial& P, const SemiclassicalState& s,
                const MomentResolver& missing = {});

// G02 G22 - G12^2 - hbar^2/4 for the first degree of freedom.
double check_uncertainty_order2(const SemiclassicalState& s);

}  // namespace momentflow
