#include "momentflow/moment_algebra.hpp"

#include "momentflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace momentflow {

namespace {

std::int64_t binom(int n, int k) {
    if (k < 0 || k > n || n < 0) return 0;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::int64_t factorial(int n) {
    std::int64_t r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// Visit every integer vector v with 0 <= v_f <= hi_f.
template <class F>
void for_each_box(const std::vector<int>& hi, F&& f) {
    std::vector<int> v(hi.size(), 0);
    for (int h : hi)
        if (h < 0) return;
    while (true) {
        f(v);
        std::size_t k = 0;
        while (k < v.size() && v[k] == hi[k]) v[k++] = 0;
        if (k == v.size()) return;
        ++v[k];
    }
}

int sum(const std::vector<int>& v) { return std::accumulate(v.begin(), v.end(), 0); }

void require_same_dof(const MomentIndex& a, const MomentIndex& b) {
    if (a.dof() != b.dof()) throw std::invalid_argument("moment indices with different DOF counts");
}

Monomial make_mono(int dof, int hbar_power, std::vector<MomentIndex> factors) {
    Monomial m;
    m.hbar_power = hbar_power;
    m.x_powers.assign(2 * dof, 0);
    m.factors = std::move(factors);
    return m;
}

}  // namespace

MomentIndex::MomentIndex(std::vector<int> qpow, std::vector<int> ppow)
    : q(std::move(qpow)), p(std::move(ppow)) {
    if (q.size() != p.size()) throw std::invalid_argument("q/p power vectors differ in length");
    for (std::size_t f = 0; f < q.size(); ++f)
        if (q[f] < 0 || p[f] < 0) throw std::invalid_argument("negative moment power");
}

MomentIndex MomentIndex::single(int a, int n) {
    if (a < 0 || a > n) throw std::invalid_argument("G^{a,n} needs 0 <= a <= n");
    return MomentIndex({n - a}, {a});
}

int MomentIndex::order() const { return sum(q) + sum(p); }

std::string MomentIndex::str() const {
    std::ostringstream os;
    if (dof() == 1) {
        os << "G^{" << p[0] << "," << order() << "}";
        return os.str();
    }
    os << "G{q:";
    for (int f = 0; f < dof(); ++f) os << (f ? "," : "") << q[f];
    os << ";p:";
    for (int f = 0; f < dof(); ++f) os << (f ? "," : "") << p[f];
    os << "}";
    return os.str();
}

bool operator<(const MomentIndex& l, const MomentIndex& r) {
    return std::make_tuple(l.order(), l.q, l.p) < std::make_tuple(r.order(), r.q, r.p);
}

bool operator==(const MomentIndex& l, const MomentIndex& r) { return l.q == r.q && l.p == r.p; }

std::vector<MomentIndex> indices_of_order(int n, int dof) {
    std::vector<MomentIndex> out;
    std::vector<int> hi(2 * dof, n);
    for_each_box(hi, [&](const std::vector<int>& v) {
        if (sum(v) != n) return;
        std::vector<int> q(dof), p(dof);
        for (int f = 0; f < dof; ++f) {
            q[f] = v[2 * f];
            p[f] = v[2 * f + 1];
        }
        out.emplace_back(q, p);
    });
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<int>> symplectic_matrix(int dof) {
    std::vector<std::vector<int>> e(2 * dof, std::vector<int>(2 * dof, 0));
    for (int f = 0; f < dof; ++f) {
        e[2 * f][2 * f + 1] = 1;
        e[2 * f + 1][2 * f] = -1;
    }
    return e;
}

bool operator<(const Monomial& l, const Monomial& r) {
    return std::tie(l.hbar_power, l.factors, l.x_powers) < std::tie(r.hbar_power, r.factors, r.x_powers);
}

bool operator==(const Monomial& l, const Monomial& r) {
    return l.hbar_power == r.hbar_power && l.x_powers == r.x_powers && l.factors == r.factors;
}

// ---------------------------------------------------------------------------

MomentPolynomial MomentPolynomial::constant(Rational c, int dof) {
    MomentPolynomial P(dof);
    P.add_term(make_mono(dof, 0, {}), c);
    return P;
}

MomentPolynomial MomentPolynomial::moment(const MomentIndex& i, Rational c) {
    MomentPolynomial P(i.dof());
    if (i.order() == 1) return P;
    std::vector<MomentIndex> f;
    if (i.order() > 1) f.push_back(i);
    P.add_term(make_mono(i.dof(), 0, f), c);
    return P;
}

MomentPolynomial MomentPolynomial::coordinate(int i, int dof, Rational c) {
    MomentPolynomial P(dof);
    Monomial m = make_mono(dof, 0, {});
    m.x_powers.at(i) = 1;
    P.add_term(m, c);
    return P;
}

void MomentPolynomial::add_term(Monomial m, Rational c) {
    if (c == Rational(0)) return;
    if (static_cast<int>(m.x_powers.size()) != 2 * dof_) m.x_powers.resize(2 * dof_, 0);
    // Drop constant factors and terms containing a first-order moment.
    std::vector<MomentIndex> kept;
    for (auto& f : m.factors) {
        if (f.order() == 1) return;
        if (f.order() > 1) kept.push_back(f);
    }
    std::sort(kept.begin(), kept.end());
    m.factors = std::move(kept);
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(std::move(m), c);
    } else {
        it->second += c;
        if (it->second == Rational(0)) terms_.erase(it);
    }
}

MomentPolynomial& MomentPolynomial::operator+=(const MomentPolynomial& o) {
    for (auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

MomentPolynomial& MomentPolynomial::operator-=(const MomentPolynomial& o) {
    for (auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

MomentPolynomial& MomentPolynomial::operator*=(Rational c) {
    if (c == Rational(0)) {
        terms_.clear();
        return *this;
    }
    for (auto& kv : terms_) kv.second *= c;
    return *this;
}

int MomentPolynomial::max_moment_order() const {
    int n = 0;
    for (auto& [m, c] : terms_)
        for (auto& f : m.factors) n = std::max(n, f.order());
    return n;
}

MomentPolynomial MomentPolynomial::classical_limit() const {
    MomentPolynomial P(dof_);
    for (auto& [m, c] : terms_)
        if (m.hbar_power == 0) P.add_term(m, c);
    return P;
}

std::string MomentPolynomial::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [m, c] : terms_) {
        const bool neg = c < Rational(0);
        if (first)
            os << (neg ? "-" : "");
        else
            os << (neg ? " - " : " + ");
        first = false;
        std::vector<std::string> parts;
        if (m.hbar_power) parts.push_back("hbar^" + std::to_string(m.hbar_power));
        for (std::size_t i = 0; i < m.x_powers.size(); ++i) {
            if (!m.x_powers[i]) continue;
            std::string x = i % 2 == 0 ? "q" : "p";
            if (dof_ > 1) x += std::to_string(i / 2 + 1);
            if (m.x_powers[i] > 1) x += "^" + std::to_string(m.x_powers[i]);
            parts.push_back(x);
        }
        for (auto& f : m.factors) parts.push_back(f.str());
        const Rational a = neg ? -c : c;
        if (a != Rational(1) || parts.empty()) {
            os << a.numerator();
            if (a.denominator() != 1) os << "/" << a.denominator();
        }
        for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "*" : "") << parts[i];
    }
    return os.str();
}

MomentPolynomial operator+(MomentPolynomial a, const MomentPolynomial& b) { return a += b; }
MomentPolynomial operator-(MomentPolynomial a, const MomentPolynomial& b) { return a -= b; }
MomentPolynomial operator*(MomentPolynomial a, Rational c) { return a *= c; }

MomentPolynomial operator*(const MomentPolynomial& a, const MomentPolynomial& b) {
    MomentPolynomial out(a.dof());
    for (auto& [ma, ca] : a.terms())
        for (auto& [mb, cb] : b.terms()) {
            Monomial m;
            m.hbar_power = ma.hbar_power + mb.hbar_power;
            m.x_powers = ma.x_powers;
            for (std::size_t i = 0; i < m.x_powers.size(); ++i) m.x_powers[i] += mb.x_powers[i];
            m.factors = ma.factors;
            m.factors.insert(m.factors.end(), mb.factors.begin(), mb.factors.end());
            out.add_term(std::move(m), ca * cb);
        }
    return out;
}

bool operator==(const MomentPolynomial& a, const MomentPolynomial& b) {
    return a.dof() == b.dof() && a.terms() == b.terms();
}

// ---------------------------------------------------------------------------

Rational kk_coefficient(int r, int s, const std::vector<int>& e, const std::vector<int>& a,
                        const std::vector<int>& b, const std::vector<int>& c,
                        const std::vector<int>& d) {
    const std::size_t N = e.size();
    if (a.size() != N || b.size() != N || c.size() != N || d.size() != N)
        throw std::out_of_range("kk_coefficient: vector lengths differ");
    if (r < 0) throw std::out_of_range("kk_coefficient: r < 0");
    const int t = 2 * r + 1 - s;
    if (s < 0 || t < 0) throw std::out_of_range("kk_coefficient: s outside [0, 2r+1]");
    for (int ef : e)
        if (ef < 0) throw std::out_of_range("kk_coefficient: negative e_f");

    std::vector<int> lo(N), hi(N), span(N);
    for (std::size_t f = 0; f < N; ++f) {
        lo[f] = std::max({e[f] - s, e[f] - a[f], e[f] - d[f], 0});
        hi[f] = std::min({b[f], c[f], t, e[f]});
        if (hi[f] < lo[f]) return 0;
        span[f] = hi[f] - lo[f];
    }
    Rational total = 0;
    for_each_box(span, [&](const std::vector<int>& off) {
        std::vector<int> g(N);
        for (std::size_t f = 0; f < N; ++f) g[f] = lo[f] + off[f];
        if (sum(g) != t) return;
        Rational term(1, factorial(s) * factorial(t));
        for (std::size_t f = 0; f < N; ++f) {
            const int u = e[f] - g[f];
            term *= Rational(binom(a[f], u) * binom(b[f], g[f]) * binom(c[f], g[f]) * binom(d[f], u));
            const std::int64_t den = binom(t, g[f]) * binom(s, u);
            if (den == 0) return;
            term /= den;
        }
        total += term;
    });
    return total;
}

MomentPolynomial bracket_moments(const MomentIndex& i1, const MomentIndex& i2) {
    require_same_dof(i1, i2);
    if (i1.order() < 2 || i2.order() < 2)
        throw std::invalid_argument("bracket_moments needs order >= 2 on both sides");
    const int N = i1.dof();
    const auto &A = i1.q, &B = i1.p, &C = i2.q, &D = i2.p;
    MomentPolynomial out(N);

    // Linear terms: pick u_f factors (al_q be_p) and v_f factors (-al_p be_q)
    // from w^{2r+1}; the remaining powers come from D(al + be).
    std::vector<int> uhi(N), vhi(N);
    for (int f = 0; f < N; ++f) {
        uhi[f] = std::min(A[f], D[f]);
        vhi[f] = std::min(B[f], C[f]);
    }
    for_each_box(uhi, [&](const std::vector<int>& u) {
        for_each_box(vhi, [&](const std::vector<int>& v) {
            const int S = sum(u) + sum(v);
            if (S % 2 == 0) return;
            const int r = (S - 1) / 2;
            Rational coeff = ((r + sum(v)) % 2 == 0) ? 1 : -1;
            coeff /= Rational(std::int64_t(1) << (2 * r));
            std::vector<int> q(N), p(N);
            for (int f = 0; f < N; ++f) {
                coeff *= Rational(binom(A[f], u[f]) * binom(D[f], u[f]) * factorial(u[f]) *
                                  binom(B[f], v[f]) * binom(C[f], v[f]) * factorial(v[f]));
                q[f] = A[f] + C[f] - u[f] - v[f];
                p[f] = B[f] + D[f] - u[f] - v[f];
            }
            MomentIndex res(q, p);
            std::vector<MomentIndex> fac;
            if (res.order() == 1) return;
            if (res.order() > 1) fac.push_back(res);
            out.add_term(make_mono(N, 2 * r, fac), coeff);
        });
    });

    // Bilinear terms from -(al x be) D(al) D(be).
    for (int f = 0; f < N; ++f) {
        if (A[f] > 0 && D[f] > 0) {
            auto a1 = A, d1 = D;
            --a1[f];
            --d1[f];
            out.add_term(make_mono(N, 0, {MomentIndex(a1, B), MomentIndex(C, d1)}),
                         Rational(-A[f] * D[f]));
        }
        if (B[f] > 0 && C[f] > 0) {
            auto b1 = B, c1 = C;
            --b1[f];
            --c1[f];
            out.add_term(make_mono(N, 0, {MomentIndex(A, b1), MomentIndex(c1, D)}),
                         Rational(B[f] * C[f]));
        }
    }
    return out;
}

MomentPolynomial bracket_moments_closed_form(const MomentIndex& i1, const MomentIndex& i2) {
    require_same_dof(i1, i2);
    const int N = i1.dof();
    const auto &a = i1.q, &b = i1.p, &c = i2.q, &d = i2.p;
    MomentPolynomial out(N);
    int rmax_sum = 0, bc_sum = 0;
    for (int f = 0; f < N; ++f) {
        rmax_sum += std::min(a[f], d[f]) + std::min(b[f], c[f]);
        bc_sum += std::min(b[f], c[f]);
    }
    for (int r = 0; 2 * r + 1 <= rmax_sum; ++r) {
        for (int s = 0; s <= std::min(r, bc_sum); ++s) {
            std::vector<int> ehi(N);
            for (int f = 0; f < N; ++f)
                ehi[f] = std::min({a[f], d[f], s}) + std::min({b[f], c[f], 2 * r + 1 - s});
            for_each_box(ehi, [&](const std::vector<int>& e) {
                if (sum(e) != 2 * r + 1) return;
                Rational K = kk_coefficient(r, s, e, a, b, c, d);
                if (K == Rational(0)) return;
                std::vector<int> q(N), p(N);
                for (int f = 0; f < N; ++f) {
                    q[f] = a[f] + c[f] - e[f];
                    p[f] = b[f] + d[f] - e[f];
                    if (q[f] < 0 || p[f] < 0) return;
                }
                Rational coeff = ((r + s) % 2 == 0) ? -1 : 1;
                coeff *= K / Rational(std::int64_t(1) << (2 * r));
                MomentIndex res(q, p);
                std::vector<MomentIndex> fac;
                if (res.order() == 1) return;
                if (res.order() > 1) fac.push_back(res);
                out.add_term(make_mono(N, 2 * r, fac), coeff);
            });
        }
    }
    for (int f = 0; f < N; ++f) {
        if (a[f] > 0 && d[f] > 0) {
            auto a1 = a, d1 = d;
            --a1[f];
            --d1[f];
            out.add_term(make_mono(N, 0, {MomentIndex(a1, b), MomentIndex(c, d1)}),
                         Rational(-a[f] * d[f]));
        }
        if (b[f] > 0 && c[f] > 0) {
            auto b1 = b, c1 = c;
            --b1[f];
            --c1[f];
            out.add_term(make_mono(N, 0, {MomentIndex(a, b1), MomentIndex(c1, d)}),
                         Rational(b[f] * c[f]));
        }
    }
    return out;
}

MomentPolynomial bracket_mixed(int x_index, const MomentIndex& i) {
    if (x_index < 0 || x_index >= 2 * i.dof()) throw std::out_of_range("coordinate index");
    return MomentPolynomial(i.dof());
}

MomentPolynomial bracket_coordinates(int i, int j, int dof) {
    const auto eps = symplectic_matrix(dof);
    return MomentPolynomial::constant(eps.at(i).at(j), dof);
}

MomentPolynomial bracket_general(const MomentPolynomial& P, const MomentPolynomial& Q) {
    const int N = P.dof();
    if (Q.dof() != N) throw std::invalid_argument("bracket_general: DOF mismatch");
    const auto eps = symplectic_matrix(N);
    MomentPolynomial out(N);
    for (auto& [m1, c1] : P.terms())
        for (auto& [m2, c2] : Q.terms()) {
            const Rational c = c1 * c2;
            const int hp = m1.hbar_power + m2.hbar_power;
            auto base_x = m1.x_powers;
            for (int i = 0; i < 2 * N; ++i) base_x[i] += m2.x_powers[i];
            auto all_factors = m1.factors;
            all_factors.insert(all_factors.end(), m2.factors.begin(), m2.factors.end());

            // Classical coordinates against classical coordinates.
            for (int i = 0; i < 2 * N; ++i) {
                if (!m1.x_powers[i]) continue;
                for (int j = 0; j < 2 * N; ++j) {
                    if (!m2.x_powers[j] || !eps[i][j]) continue;
                    Monomial m;
                    m.hbar_power = hp;
                    m.x_powers = base_x;
                    --m.x_powers[i];
                    --m.x_powers[j];
                    m.factors = all_factors;
                    out.add_term(std::move(m), c * Rational(m1.x_powers[i] * m2.x_powers[j] * eps[i][j]));
                }
            }
            // Moments against moments; coordinates and moments commute.
            for (std::size_t k = 0; k < m1.factors.size(); ++k)
                for (std::size_t l = 0; l < m2.factors.size(); ++l) {
                    MomentPolynomial rest(N);
                    Monomial m;
                    m.hbar_power = hp;
                    m.x_powers = base_x;
                    for (std::size_t k2 = 0; k2 < m1.factors.size(); ++k2)
                        if (k2 != k) m.factors.push_back(m1.factors[k2]);
                    for (std::size_t l2 = 0; l2 < m2.factors.size(); ++l2)
                        if (l2 != l) m.factors.push_back(m2.factors[l2]);
                    rest.add_term(std::move(m), c);
                    out += rest * bracket_moments(m1.factors[k], m2.factors[l]);
                }
        }
    return out;
}

// ---------------------------------------------------------------------------

double SemiclassicalState::get(const MomentIndex& i) const {
    const int n = i.order();
    if (n == 0) return 1.0;
    if (n == 1) return 0.0;
    auto it = moments.find(i);
    if (it == moments.end()) throw ClosureError("moment " + i.str() + " not available in state");
    return it->second;
}

double evaluate(const MomentPolynomial& P, const SemiclassicalState& s, const MomentResolver& missing) {
    double total = 0.0;
    for (auto& [m, c] : P.terms()) {
        double v = boost::rational_cast<double>(c);
        if (m.hbar_power) v *= std::pow(s.hbar, m.hbar_power);
        for (std::size_t i = 0; i < m.x_powers.size(); ++i)
            if (m.x_powers[i]) v *= std::pow(s.x.at(i), m.x_powers[i]);
        for (auto& f : m.factors) {
            if (missing && f.order() > 1 && !s.moments.count(f))
                v *= missing(f, s);
            else
                v *= s.get(f);
        }
        total += v;
    }
    return total;
}

double check_uncertainty_order2(const SemiclassicalState& s) {
    if (s.dof() == 1) {
        const double g02 = s.get(0, 2), g12 = s.get(1, 2), g22 = s.get(2, 2);
        return g02 * g22 - g12 * g12 - 0.25 * s.hbar * s.hbar;
    }
    std::vector<int> z(s.dof(), 0), q2 = z, p2 = z, one = z;
    q2[0] = 2;
    one[0] = 1;
    p2[0] = 2;
    const double g02 = s.get(MomentIndex(q2, z)), g12 = s.get(MomentIndex(one, one)),
                 g22 = s.get(MomentIndex(z, p2));
    return g02 * g22 - g12 * g12 - 0.25 * s.hbar * s.hbar;
}

}  // namespace momentflow
