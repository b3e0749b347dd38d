#include "momentflow/hamiltonian.hpp"

#include "momentflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace momentflow {

namespace {

std::int64_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::int64_t factorial(int n) {
    std::int64_t r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

std::int64_t double_factorial_odd(int n) {  // (n-1)!! for even n
    std::int64_t r = 1;
    for (int k = n - 1; k > 1; k -= 2) r *= k;
    return r;
}

std::string fmt17(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17) << v;
    return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------

double Potential::operator()(double q, int k) const {
    if (k > max_derivative)
        throw ConfigError("potential derivative of order " + std::to_string(k) + " not available");
    return eval ? eval(q, k) : 0.0;
}

Potential Potential::zero() { return polynomial({}); }

Potential Potential::polynomial(std::vector<double> c) {
    while (!c.empty() && c.back() == 0.0) c.pop_back();
    Potential U;
    U.coeffs = c;
    U.is_polynomial = true;
    U.degree = c.empty() ? -1 : static_cast<int>(c.size()) - 1;
    U.max_derivative = 1 << 20;
    U.eval = [c](double q, int k) {
        double t = 0.0, qp = 1.0;
        for (int j = k; j < static_cast<int>(c.size()); ++j) {
            double f = 1.0;
            for (int i = 0; i < k; ++i) f *= (j - i);
            t += c[j] * f * qp;
            qp *= q;
        }
        return t;
    };
    return U;
}

Potential Potential::quartic(double delta) { return polynomial({0.0, 0.0, 0.0, 0.0, delta / 24.0}); }

Potential Potential::callable(std::function<double(double, int)> f, int max_derivative) {
    Potential U;
    U.eval = std::move(f);
    U.max_derivative = max_derivative;
    return U;
}

// ---------------------------------------------------------------------------

ClassicalHamiltonian ClassicalHamiltonian::harmonic(double m, double omega) {
    ClassicalHamiltonian H;
    H.m = m;
    H.omega = omega;
    return H;
}

ClassicalHamiltonian ClassicalHamiltonian::free_particle(double m) { return harmonic(m, 0.0); }

ClassicalHamiltonian ClassicalHamiltonian::quartic(double m, double omega, double delta) {
    ClassicalHamiltonian H = harmonic(m, omega);
    H.U = Potential::quartic(delta);
    return H;
}

ClassicalHamiltonian ClassicalHamiltonian::cosmology(double gamma, double kappa, double E) {
    ClassicalHamiltonian H;
    H.kind = Kind::Cosmology;
    H.gamma = gamma;
    H.kappa = kappa;
    H.E = E;
    return H;
}

double ClassicalHamiltonian::derivative(int iq, int jp, double x0, double x1) const {
    if (kind == Kind::Oscillator) {
        if (m <= 0.0) throw DomainError("mass must be positive");
        const double q = x0, p = x1;
        if (jp == 0) {
            double v = U(q, iq);
            if (iq == 0) v += 0.5 * m * omega * omega * q * q + 0.5 * p * p / m;
            if (iq == 1) v += m * omega * omega * q;
            if (iq == 2) v += m * omega * omega;
            return v;
        }
        if (iq != 0) return 0.0;
        if (jp == 1) return p / m;
        if (jp == 2) return 1.0 / m;
        return 0.0;
    }
    const double c = x0, p = x1;
    if (!(p > 0.0)) throw DomainError("cosmology Hamiltonian needs p > 0 (p = " + fmt17(p) + ")");
    double cpart = iq == 0 ? c * c : iq == 1 ? 2.0 * c : iq == 2 ? 2.0 : 0.0;
    double ppart = std::sqrt(p);
    double expo = 0.5;
    for (int j = 0; j < jp; ++j) {
        ppart *= expo / p;
        expo -= 1.0;
    }
    double v = -3.0 / (gamma * gamma * kappa) * cpart * ppart;
    if (iq == 0 && jp == 0) v += E;
    return v;
}

bool ClassicalHamiltonian::derivative_vanishes(int iq, int jp) const {
    if (kind == Kind::Cosmology) return iq > 2;
    if (jp > 0) return iq > 0 || jp > 2;
    if (iq == 0) return false;
    if (iq <= 2 && omega != 0.0) return false;
    return U.derivative_vanishes(iq);
}

double ClassicalHamiltonian::symplectic_scale() const {
    return kind == Kind::Cosmology ? gamma * kappa / 3.0 : 1.0;
}

std::string ClassicalHamiltonian::name() const {
    if (kind == Kind::Cosmology) return "cosmology";
    if (!U.is_polynomial) return "callable";
    if (U.degree < 0) return omega == 0.0 ? "free" : "harmonic";
    bool quartic_only = U.degree == 4;
    for (int k = 0; k < 4 && quartic_only; ++k) quartic_only = U.coeffs[k] == 0.0;
    return quartic_only ? "quartic" : "polynomial";
}

// ---------------------------------------------------------------------------

double QuantumHamiltonian::value(const SemiclassicalState& s) const {
    const double x0 = s.x.at(0), x1 = s.x.at(1);
    double v = H.value(x0, x1);
    for (auto& t : terms)
        v += boost::rational_cast<double>(t.weight) * H.derivative(t.n - t.a, t.a, x0, x1) * s.get(t.a, t.n);
    return v;
}

double QuantumHamiltonian::dropped_magnitude(const SemiclassicalState& s) const {
    const int n = dropped_order;
    double v = 0.0;
    for (int a = 0; a <= n; ++a) {
        if (H.derivative_vanishes(n - a, a)) continue;
        const double w = double(binom(n, a)) / double(factorial(n));
        v += w * H.derivative(n - a, a, s.x.at(0), s.x.at(1)) *
             closure_value(ClosurePolicy::GaussianFactorize, MomentIndex::single(a, n), s);
    }
    return std::abs(v);
}

std::string QuantumHamiltonian::str() const {
    std::ostringstream os;
    os << "H_Q = H";
    for (auto& t : terms) {
        os << " + " << t.weight.numerator() << "/" << t.weight.denominator() << "*d_q^" << (t.n - t.a)
           << "d_p^" << t.a << "H*" << MomentIndex::single(t.a, t.n).str();
    }
    return os.str();
}

QuantumHamiltonian expand_quantum_hamiltonian(const ClassicalHamiltonian& H, int n_max) {
    if (n_max < 2) throw ConfigError("n_max must be >= 2");
    if (H.kind == ClassicalHamiltonian::Kind::Oscillator && H.U.max_derivative < n_max + 2)
        throw ConfigError("potential provides derivatives only to order " +
                          std::to_string(H.U.max_derivative) + ", need " + std::to_string(n_max + 2));
    QuantumHamiltonian HQ;
    HQ.H = H;
    HQ.n_max = n_max;
    HQ.dropped_order = n_max + 1;
    for (int n = 2; n <= n_max; ++n)
        for (int a = 0; a <= n; ++a) {
            if (H.derivative_vanishes(n - a, a)) continue;
            HQ.terms.push_back({a, n, Rational(binom(n, a), factorial(n))});
        }
    return HQ;
}

double to_dimensionless(double G, int a, int n, double hbar, double m, double omega) {
    return G * std::pow(hbar, -0.5 * n) * std::pow(m * omega, 0.5 * n - a);
}

double from_dimensionless(double Gt, int a, int n, double hbar, double m, double omega) {
    return Gt * std::pow(hbar, 0.5 * n) * std::pow(m * omega, a - 0.5 * n);
}

SemiclassicalState to_dimensionless(const SemiclassicalState& s, double m, double omega) {
    SemiclassicalState t = s;
    for (auto& [idx, v] : t.moments) v = to_dimensionless(v, idx.a(), idx.order(), s.hbar, m, omega);
    return t;
}

// ---------------------------------------------------------------------------

ClosurePolicy parse_closure(const std::string& name) {
    if (name == "zero") return ClosurePolicy::Zero;
    if (name == "gaussian-factorize") return ClosurePolicy::GaussianFactorize;
    throw ConfigError("unknown closure policy '" + name + "'");
}

std::string closure_name(ClosurePolicy p) {
    return p == ClosurePolicy::Zero ? "zero" : "gaussian-factorize";
}

MomentPolynomial closure_apply(ClosurePolicy policy, const MomentIndex& idx) {
    if (idx.dof() != 1) throw ClosureError("closure implemented for one degree of freedom, got " + idx.str());
    MomentPolynomial out(1);
    const int n = idx.order(), a = idx.a(), nq = n - a;
    if (policy == ClosurePolicy::Zero || n % 2 == 1) return out;
    // Isserlis: sum over pairings of nq q-slots and a p-slots. l mixed pairs.
    for (int l = nq % 2; l <= std::min(nq, a); l += 2) {
        if ((a - l) % 2) continue;
        const int k = (nq - l) / 2, mm = (a - l) / 2;
        const std::int64_t count = binom(nq, l) * binom(a, l) * factorial(l) * double_factorial_odd(nq - l) *
                                   double_factorial_odd(a - l);
        Monomial mono;
        mono.x_powers.assign(2, 0);
        for (int i = 0; i < k; ++i) mono.factors.push_back(MomentIndex::single(0, 2));
        for (int i = 0; i < l; ++i) mono.factors.push_back(MomentIndex::single(1, 2));
        for (int i = 0; i < mm; ++i) mono.factors.push_back(MomentIndex::single(2, 2));
        out.add_term(mono, Rational(count));
    }
    return out;
}

double closure_value(ClosurePolicy policy, const MomentIndex& idx, const SemiclassicalState& s) {
    return evaluate(closure_apply(policy, idx), s);
}

// ---------------------------------------------------------------------------

std::string moment_column(int a, int n) { return "G_" + std::to_string(a) + "_" + std::to_string(n); }

int EquationSystem::slot(int a, int n) const {
    if (n < 2 || n > n_max_ || a < 0 || a > n) return -1;
    // q, p, then blocks of n+1 per order.
    int k = 2;
    for (int m = 2; m < n; ++m) k += m + 1;
    return k + a;
}

MomentIndex EquationSystem::index_of_slot(int k) const {
    int base = 2;
    for (int n = 2; n <= n_max_; ++n) {
        if (k < base + n + 1) return MomentIndex::single(k - base, n);
        base += n + 1;
    }
    throw std::out_of_range("slot outside the system");
}

void EquationSystem::rhs(const std::vector<double>& y, std::vector<double>& dydt, double hbar) const {
    dydt.assign(y.size(), 0.0);
    const double x0 = y[0], x1 = y[1];
    // Small cache of Hamiltonian derivatives used in this evaluation.
    double cache[16][8];
    bool have[16][8] = {};
    auto dH = [&](int dq, int dp) {
        if (dq < 16 && dp < 8) {
            if (!have[dq][dp]) {
                cache[dq][dp] = H_.derivative(dq, dp, x0, x1);
                have[dq][dp] = true;
            }
            return cache[dq][dp];
        }
        return H_.derivative(dq, dp, x0, x1);
    };
    double hpow[16];
    hpow[0] = 1.0;
    for (int i = 1; i < 16; ++i) hpow[i] = hpow[i - 1] * hbar;
    for (std::size_t k = 0; k < rhs_.size(); ++k) {
        double acc = 0.0;
        for (auto& t : rhs_[k]) {
            double v = t.coeff * (t.hbar_power < 16 ? hpow[t.hbar_power] : std::pow(hbar, t.hbar_power));
            v *= dH(t.dq, t.dp);
            for (int s : t.slots) v *= y[s];
            acc += v;
        }
        dydt[k] = acc;
    }
}

std::vector<double> EquationSystem::pack(const SemiclassicalState& s) const {
    std::vector<double> y(names_.size(), 0.0);
    y[0] = s.x.at(0);
    y[1] = s.x.at(1);
    for (int k = 2; k < size(); ++k) {
        auto idx = index_of_slot(k);
        auto it = s.moments.find(idx);
        y[k] = it == s.moments.end() ? 0.0 : it->second;
    }
    return y;
}

SemiclassicalState EquationSystem::unpack(const std::vector<double>& y, double hbar) const {
    SemiclassicalState s;
    s.hbar = hbar;
    s.n_max = n_max_;
    s.x = {y[0], y[1]};
    for (int k = 2; k < size(); ++k) s.moments[index_of_slot(k)] = y[k];
    return s;
}

bool EquationSystem::depends_on(int k, int j) const {
    for (auto& t : rhs_.at(k)) {
        if (std::find(t.slots.begin(), t.slots.end(), j) != t.slots.end()) return true;
        if (j < 2) {
            // Does the Hamiltonian derivative vary with x^j?
            const int dq = t.dq + (j == 0), dp = t.dp + (j == 1);
            if (!H_.derivative_vanishes(dq, dp)) return true;
        }
    }
    return false;
}

std::string EquationSystem::listing() const {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << "# " << H_.name() << " n_max=" << n_max_ << " closure=" << closure_name(closure_) << "\n";
    for (std::size_t k = 0; k < rhs_.size(); ++k) {
        os << "d/dt " << names_[k] << " =";
        if (rhs_[k].empty()) os << " 0";
        for (auto& t : rhs_[k]) {
            os << " " << (t.coeff < 0 ? "-" : "+") << " " << fmt17(std::abs(t.coeff));
            if (t.hbar_power) os << "*hbar^" << t.hbar_power;
            os << "*d_q^" << t.dq << "d_p^" << t.dp << "H";
            for (int s : t.slots) os << "*" << names_[s];
        }
        os << "\n";
    }
    return os.str();
}

nlohmann::json EquationSystem::listing_json() const {
    nlohmann::json j;
    j["model"] = H_.name();
    j["n_max"] = n_max_;
    j["closure"] = closure_name(closure_);
    j["variables"] = names_;
    nlohmann::json eqs = nlohmann::json::array();
    for (std::size_t k = 0; k < rhs_.size(); ++k) {
        nlohmann::json terms = nlohmann::json::array();
        for (auto& t : rhs_[k]) {
            std::vector<std::string> f;
            for (int s : t.slots) f.push_back(names_[s]);
            terms.push_back({{"coeff", t.coeff},
                             {"rational", std::to_string(t.exact.numerator()) + "/" +
                                              std::to_string(t.exact.denominator())},
                             {"hbar_power", t.hbar_power},
                             {"dH", {t.dq, t.dp}},
                             {"factors", f}});
        }
        eqs.push_back({{"variable", names_[k]}, {"terms", terms}});
    }
    j["equations"] = eqs;
    return j;
}

EquationSystem generate_eom(const QuantumHamiltonian& HQ, const EomOptions& opt) {
    EquationSystem sys;
    sys.H_ = HQ.H;
    sys.n_max_ = opt.n_max > 0 ? opt.n_max : HQ.n_max;
    if (sys.n_max_ < 2) throw ConfigError("n_max must be >= 2");
    sys.closure_ = opt.closure;
    const bool cosmo = HQ.H.kind == ClassicalHamiltonian::Kind::Cosmology;
    sys.names_ = {cosmo ? "c" : "q", "p"};
    for (int n = 2; n <= sys.n_max_; ++n)
        for (int a = 0; a <= n; ++a) sys.names_.push_back(moment_column(a, n));
    const double s = HQ.H.symplectic_scale();
    const auto& H = HQ.H;

    using Key = std::tuple<int, int, int, std::vector<int>>;
    auto emit = [&](std::map<Key, Rational>& acc, std::map<Key, double>& scale, Rational c, double sc,
                    int hp, int dq, int dp, std::vector<int> slots) {
        std::sort(slots.begin(), slots.end());
        Key key{hp, dq, dp, slots};
        acc[key] += c;
        scale[key] = sc;
    };
    auto finish = [&](std::map<Key, Rational>& acc, std::map<Key, double>& scale) {
        std::vector<RhsTerm> out;
        for (auto& [key, c] : acc) {
            if (c == Rational(0)) continue;
            RhsTerm t;
            t.exact = c;
            t.coeff = boost::rational_cast<double>(c) * scale[key];
            std::tie(t.hbar_power, t.dq, t.dp, t.slots) = key;
            out.push_back(std::move(t));
        }
        return out;
    };

    // Expand a product of moment factors into slot lists, applying the closure.
    std::function<void(const std::vector<MomentIndex>&, std::size_t, Rational, std::vector<int>,
                       const std::function<void(Rational, std::vector<int>)>&)>
        expand = [&](const std::vector<MomentIndex>& fac, std::size_t i, Rational c, std::vector<int> slots,
                     const std::function<void(Rational, std::vector<int>)>& sink) {
            if (i == fac.size()) {
                sink(c, slots);
                return;
            }
            const auto& f = fac[i];
            if (f.order() <= sys.n_max_) {
                slots.push_back(sys.slot(f.a(), f.order()));
                expand(fac, i + 1, c, slots, sink);
                return;
            }
            MomentPolynomial repl = closure_apply(opt.closure, f);
            for (auto& [m, rc] : repl.terms()) {
                auto sl = slots;
                for (auto& g : m.factors) sl.push_back(sys.slot(g.a(), g.order()));
                expand(fac, i + 1, c * rc, sl, sink);
            }
        };

    sys.rhs_.assign(sys.names_.size(), {});
    // Classical coordinates: x0' = s dH_Q/dx1, x1' = -s dH_Q/dx0.
    for (int k = 0; k < 2; ++k) {
        std::map<Key, Rational> acc;
        std::map<Key, double> scale;
        const Rational sign = k == 0 ? 1 : -1;
        const int ddq = k == 0 ? 0 : 1, ddp = k == 0 ? 1 : 0;
        if (!H.derivative_vanishes(ddq, ddp)) emit(acc, scale, sign, s, 0, ddq, ddp, {});
        for (auto& t : HQ.terms) {
            const int dq = t.n - t.a + ddq, dp = t.a + ddp;
            if (H.derivative_vanishes(dq, dp)) continue;
            expand({MomentIndex::single(t.a, t.n)}, 0, sign * t.weight, {},
                   [&](Rational c, std::vector<int> sl) { emit(acc, scale, c, s, 0, dq, dp, sl); });
        }
        sys.rhs_[k] = finish(acc, scale);
    }
    // Moments: G' = sum_terms w dH {G, G^{a,n}}.
    for (int k = 2; k < sys.size(); ++k) {
        const MomentIndex gi = sys.index_of_slot(k);
        std::map<Key, Rational> acc;
        std::map<Key, double> scale;
        for (auto& t : HQ.terms) {
            const int dq = t.n - t.a, dp = t.a;
            if (H.derivative_vanishes(dq, dp)) continue;
            MomentPolynomial br = bracket_moments(gi, MomentIndex::single(t.a, t.n));
            for (auto& [m, c] : br.terms()) {
                const double sc = std::pow(s, 1 + m.hbar_power);
                expand(m.factors, 0, c * t.weight, {},
                       [&](Rational cc, std::vector<int> sl) { emit(acc, scale, cc, sc, m.hbar_power, dq, dp, sl); });
            }
        }
        sys.rhs_[k] = finish(acc, scale);
    }
    return sys;
}

}  // namespace momentflow
