#include "momentflow/oracle.hpp"

#include "momentflow/errors.hpp"

#include <boost/math/special_functions/hermite.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>
#include <sstream>

namespace momentflow {

namespace {

constexpr Complex I(0.0, 1.0);

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Dense ladder matrices of dimension n.
CMatrix q_matrix(int n, double qs) {
    CMatrix Q = CMatrix::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) Q(i, i + 1) = Q(i + 1, i) = qs * std::sqrt(double(i + 1));
    return Q;
}

CMatrix p_matrix(int n, double ps) {
    CMatrix P = CMatrix::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) {
        P(i + 1, i) = I * ps * std::sqrt(double(i + 1));
        P(i, i + 1) = -I * ps * std::sqrt(double(i + 1));
    }
    return P;
}

CMatrix hermitize(const CMatrix& M) { return 0.5 * (M + M.adjoint()); }

// Sum over all words with j q's and k p's, in dimension n.
CMatrix word_sum(int j, int k, const CMatrix& Q, const CMatrix& P, std::map<std::pair<int, int>, CMatrix>& memo) {
    if (j == 0 && k == 0) return CMatrix::Identity(Q.rows(), Q.cols());
    auto key = std::make_pair(j, k);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    CMatrix S = CMatrix::Zero(Q.rows(), Q.cols());
    if (j > 0) S += Q * word_sum(j - 1, k, Q, P, memo);
    if (k > 0) S += P * word_sum(j, k - 1, Q, P, memo);
    memo[key] = S;
    return S;
}

void check_basis(const FockBasis& b) {
    if (b.D < 8) throw CapacityError("Fock dimension must be at least 8");
    if (!(b.m > 0.0) || !(b.omega > 0.0) || !(b.hbar > 0.0))
        throw ConfigError("Fock basis needs m, omega, hbar > 0");
}

WaveVector normalized(CVector psi, const FockBasis& b, int dof = 1) {
    const double n = psi.norm();
    if (!(n > 0.0)) throw InternalError("zero state vector");
    return {psi / n, b, dof};
}

}  // namespace

double FockBasis::q_scale() const { return std::sqrt(hbar / (2.0 * m * omega)); }
double FockBasis::p_scale() const { return std::sqrt(hbar * m * omega / 2.0); }

FockOps fock_ops(const FockBasis& b) {
    check_basis(b);
    FockOps ops;
    ops.q = {q_matrix(b.D, b.q_scale()), b};
    ops.p = {p_matrix(b.D, b.p_scale()), b};
    return ops;
}

FockOps fock_ops(int D, double m, double omega, double hbar) { return fock_ops(FockBasis{D, m, omega, hbar}); }

std::string capacity_warning(int D, int n) {
    if (D >= 10 * n) return {};
    std::ostringstream os;
    os << "Fock dimension " << D << " is small for moments of order " << n << " (want >= " << 10 * n << ")";
    return os.str();
}

FockOperator weyl_op(int j, int k, const FockBasis& b, int cap) {
    check_basis(b);
    if (j < 0 || k < 0) throw std::out_of_range("negative Weyl power");
    if (j + k > cap) throw CapacityError("Weyl order " + std::to_string(j + k) + " exceeds cap " + std::to_string(cap));
    const int De = b.D + j + k + 1;
    const CMatrix Q = q_matrix(De, b.q_scale()), P = p_matrix(De, b.p_scale());
    std::map<std::pair<int, int>, CMatrix> memo;
    CMatrix S = word_sum(j, k, Q, P, memo) / binom(j + k, j);
    return {hermitize(S.topLeftCorner(b.D, b.D)), b};
}

FockOperator weyl_op(int j, int k, const FockOps& ops, int cap) { return weyl_op(j, k, ops.q.basis, cap); }

FockOperator hamiltonian_matrix(const ClassicalHamiltonian& H, const FockBasis& b) {
    check_basis(b);
    if (H.kind != ClassicalHamiltonian::Kind::Oscillator)
        throw ConfigError("the Fock oracle does not cover the cosmology Hamiltonian");
    if (!H.U.is_polynomial) throw ConfigError("the Fock oracle needs a polynomial potential");
    const int deg = std::max(2, H.U.degree);
    const int De = b.D + deg + 1;
    const CMatrix Q = q_matrix(De, b.q_scale()), P = p_matrix(De, b.p_scale());
    CMatrix M = P * P / (2.0 * H.m) + 0.5 * H.m * H.omega * H.omega * Q * Q;
    CMatrix Qk = CMatrix::Identity(De, De);
    for (int k = 0; k <= H.U.degree; ++k) {
        if (k > 0) Qk = Qk * Q;
        if (H.U.coeffs[k] != 0.0) M += H.U.coeffs[k] * Qk;
    }
    return {hermitize(M.topLeftCorner(b.D, b.D)), b};
}

Propagator::Propagator(const FockOperator& H) : hbar_(H.basis.hbar) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(H.M);
    if (es.info() != Eigen::Success) throw InternalError("eigendecomposition failed");
    E_ = es.eigenvalues();
    V_ = es.eigenvectors();
}

CVector Propagator::evolve(const CVector& psi0, double t) const {
    CVector c = V_.adjoint() * psi0;
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) *= std::exp(-I * E_(i) * t / hbar_);
    return V_ * c;
}

CVector evolve(const FockOperator& H, const CVector& psi0, double t) { return Propagator(H).evolve(psi0, t); }

// ---------------------------------------------------------------------------

WeylExpectations::WeylExpectations(const WaveVector& w, int cap) : dof_(w.dof), cap_(cap) {
    check_basis(w.basis);
    if (dof_ != 1 && dof_ != 2) throw ConfigError("oracle supports one or two degrees of freedom");
    const int D = w.basis.D;
    De_ = D + cap + 1;
    qs_ = w.basis.q_scale();
    ps_ = w.basis.p_scale();
    hbar_ = w.basis.hbar;
    if (dof_ == 1) {
        if (w.psi.size() != D) throw ConfigError("state length does not match the basis");
        psi_ = CMatrix::Zero(De_, 1);
        psi_.topRows(D) = w.psi;
    } else {
        if (w.psi.size() != D * D) throw ConfigError("state length does not match the basis");
        psi_ = CMatrix::Zero(De_, De_);
        for (int a = 0; a < D; ++a)
            for (int b = 0; b < D; ++b) psi_(a, b) = w.psi(a * D + b);
    }
    mean_.assign(2 * dof_, 0.0);
    for (int f = 0; f < dof_; ++f) {
        std::vector<int> q(dof_, 0), p(dof_, 0);
        q[f] = 1;
        mean_[2 * f] = expect(q, p, false);
        q[f] = 0;
        p[f] = 1;
        mean_[2 * f + 1] = expect(q, p, false);
    }
}

CMatrix WeylExpectations::apply(const CMatrix& v, int f, bool is_p, bool centered) const {
    const int n = De_;
    CMatrix out = CMatrix::Zero(v.rows(), v.cols());
    auto lower = [&](int i) -> Complex {  // X(i, i-1)
        return is_p ? I * ps_ * std::sqrt(double(i)) : Complex(qs_ * std::sqrt(double(i)));
    };
    auto upper = [&](int i) -> Complex {  // X(i, i+1)
        return is_p ? -I * ps_ * std::sqrt(double(i + 1)) : Complex(qs_ * std::sqrt(double(i + 1)));
    };
    if (f == 0) {
        for (int i = 0; i < n; ++i) {
            if (i > 0) out.row(i) += lower(i) * v.row(i - 1);
            if (i + 1 < n) out.row(i) += upper(i) * v.row(i + 1);
        }
    } else {
        for (int j = 0; j < n; ++j) {
            if (j > 0) out.col(j) += lower(j) * v.col(j - 1);
            if (j + 1 < n) out.col(j) += upper(j) * v.col(j + 1);
        }
    }
    if (centered) out -= mean_[2 * f + (is_p ? 1 : 0)] * v;
    return out;
}

const CMatrix& WeylExpectations::vec(const Key& k, bool centered) const {
    auto& memo = centered ? cen_ : raw_;
    auto it = memo.find(k);
    if (it != memo.end()) return it->second;
    int f = -1;
    for (int g = 0; g < dof_; ++g)
        if (k[2 * g] + k[2 * g + 1] > 0) {
            f = g;
            break;
        }
    CMatrix v;
    if (f < 0) {
        v = psi_;
    } else {
        v = CMatrix::Zero(psi_.rows(), psi_.cols());
        if (k[2 * f] > 0) {
            Key kk = k;
            --kk[2 * f];
            v += apply(vec(kk, centered), f, false, centered);
        }
        if (k[2 * f + 1] > 0) {
            Key kk = k;
            --kk[2 * f + 1];
            v += apply(vec(kk, centered), f, true, centered);
        }
    }
    return memo.emplace(k, std::move(v)).first->second;
}

double WeylExpectations::expect(const std::vector<int>& q, const std::vector<int>& p, bool centered) const {
    Key k(2 * dof_);
    int total = 0;
    double norm = 1.0;
    for (int f = 0; f < dof_; ++f) {
        k[2 * f] = q.at(f);
        k[2 * f + 1] = p.at(f);
        total += q[f] + p[f];
        norm *= binom(q[f] + p[f], q[f]);
    }
    if (total > cap_) throw CapacityError("Weyl order " + std::to_string(total) + " exceeds cap");
    const CMatrix& v = vec(k, centered);
    return (psi_.conjugate().cwiseProduct(v)).sum().real() / norm;
}

double WeylExpectations::commutator(const std::vector<int>& qa, const std::vector<int>& pa,
                                    const std::vector<int>& qb, const std::vector<int>& pb) const {
    Key ka(2 * dof_), kb(2 * dof_);
    double na = 1.0, nb = 1.0;
    int ta = 0, tb = 0;
    for (int f = 0; f < dof_; ++f) {
        ka[2 * f] = qa.at(f);
        ka[2 * f + 1] = pa.at(f);
        kb[2 * f] = qb.at(f);
        kb[2 * f + 1] = pb.at(f);
        na *= binom(qa[f] + pa[f], qa[f]);
        nb *= binom(qb[f] + pb[f], qb[f]);
        ta += qa[f] + pa[f];
        tb += qb[f] + pb[f];
    }
    if (ta > cap_ || tb > cap_) throw CapacityError("Weyl order exceeds cap");
    const CMatrix& va = vec(ka, false);
    const CMatrix& vb = vec(kb, false);
    const Complex ip = (va.conjugate().cwiseProduct(vb)).sum() / (na * nb);
    return 2.0 * ip.imag() / hbar_;
}

SemiclassicalState moments_of(const WaveVector& w, int up_to_n) {
    if (up_to_n > kWeylCap) throw CapacityError("moment order exceeds the Weyl cap");
    WeylExpectations X(w, std::max(up_to_n, 2));
    SemiclassicalState s;
    s.hbar = w.basis.hbar;
    s.n_max = up_to_n;
    s.x = X.mean();
    for (int n = 2; n <= up_to_n; ++n)
        for (auto& idx : indices_of_order(n, w.dof)) s.moments[idx] = X.expect(idx.q, idx.p, true);
    return s;
}

namespace {

using Key = std::vector<int>;

// Gradient of a moment (or a coordinate, for order 1) with respect to the
// raw Weyl expectation values u_key.
std::map<Key, double> moment_gradient(const MomentIndex& idx, const WeylExpectations& X) {
    const int N = X.dof();
    const auto& x = X.mean();
    std::map<Key, double> grad;
    if (idx.order() == 1) {
        Key k(2 * N, 0);
        for (int f = 0; f < N; ++f) {
            k[2 * f] = idx.q[f];
            k[2 * f + 1] = idx.p[f];
        }
        grad[k] = 1.0;
        return grad;
    }
    if (idx.order() == 0) return grad;
    // Enumerate sub-powers (i_f <= A_f, l_f <= B_f).
    Key sub(2 * N, 0), top(2 * N);
    for (int f = 0; f < N; ++f) {
        top[2 * f] = idx.q[f];
        top[2 * f + 1] = idx.p[f];
    }
    while (true) {
        double c = 1.0, P = 1.0;
        bool zero_key = true;
        for (int s = 0; s < 2 * N; ++s) {
            c *= binom(top[s], sub[s]);
            P *= std::pow(-x[s], top[s] - sub[s]);
            if (sub[s]) zero_key = false;
        }
        std::vector<int> sq(N), sp(N);
        for (int f = 0; f < N; ++f) {
            sq[f] = sub[2 * f];
            sp[f] = sub[2 * f + 1];
        }
        const double U = zero_key ? 1.0 : X.expect(sq, sp, false);
        if (!zero_key) grad[sub] += c * P;
        for (int s = 0; s < 2 * N; ++s) {
            const int e = top[s] - sub[s];
            if (e == 0) continue;
            double dP = -e * std::pow(-x[s], e - 1);
            for (int t = 0; t < 2 * N; ++t)
                if (t != s) dP *= std::pow(-x[t], top[t] - sub[t]);
            Key unit(2 * N, 0);
            unit[s] = 1;
            grad[unit] += c * U * dP;
        }
        int s = 0;
        while (s < 2 * N && ++sub[s] > top[s]) sub[s++] = 0;
        if (s == 2 * N) break;
    }
    return grad;
}

}  // namespace

double bracket_oracle(const MomentIndex& i1, const MomentIndex& i2, const WeylExpectations& X) {
    const int N = X.dof();
    if (i1.dof() != N || i2.dof() != N) throw ConfigError("index and state disagree on the number of DOF");
    const auto g1 = moment_gradient(i1, X), g2 = moment_gradient(i2, X);
    double s = 0.0;
    for (auto& [ka, va] : g1)
        for (auto& [kb, vb] : g2) {
            std::vector<int> qa(N), pa(N), qb(N), pb(N);
            for (int f = 0; f < N; ++f) {
                qa[f] = ka[2 * f];
                pa[f] = ka[2 * f + 1];
                qb[f] = kb[2 * f];
                pb[f] = kb[2 * f + 1];
            }
            s += va * vb * X.commutator(qa, pa, qb, pb);
        }
    return s;
}

double bracket_oracle(const MomentIndex& i1, const MomentIndex& i2, const WaveVector& w) {
    const int order = std::max(i1.order(), i2.order());
    WeylExpectations X(w, std::max(order, 2));
    return bracket_oracle(i1, i2, X);
}

// ---------------------------------------------------------------------------

WaveVector ground_state(const FockBasis& b) { return number_state(0, b); }

WaveVector number_state(int n, const FockBasis& b) {
    check_basis(b);
    if (n < 0 || n >= b.D) throw CapacityError("number state outside the basis");
    CVector psi = CVector::Zero(b.D);
    psi(n) = 1.0;
    return {psi, b, 1};
}

WaveVector coherent(Complex alpha, const FockBasis& b) {
    check_basis(b);
    CVector psi(b.D);
    Complex c = std::exp(-0.5 * std::norm(alpha));
    double sum = 0.0;
    for (int n = 0; n < b.D; ++n) {
        if (n > 0) c *= alpha / std::sqrt(double(n));
        psi(n) = c;
        sum += std::norm(c);
    }
    if (1.0 - sum > 1e-10) throw CapacityError("coherent state truncation tail exceeds 1e-10; raise the Fock dimension");
    return normalized(psi, b);
}

Complex alpha_of(double q, double p, const FockBasis& b) {
    return {q / (2.0 * b.q_scale()), p / (2.0 * b.p_scale())};
}

WaveVector coherent_at(double q, double p, const FockBasis& b) { return coherent(alpha_of(q, p, b), b); }

WaveVector squeezed(const Eigen::Matrix2d& g, const Eigen::Vector2d& x0, const FockBasis& b) {
    check_basis(b);
    const int Db = b.D + 60;
    const CMatrix Q = q_matrix(Db + 3, b.q_scale()), P = p_matrix(Db + 3, b.p_scale());
    const double gs = 0.5 * (g(0, 1) + g(1, 0));
    CMatrix K = g(0, 0) * Q * Q + gs * (Q * P + P * Q) + g(1, 1) * P * P;
    K = (I / (2.0 * b.hbar)) * hermitize(K.topLeftCorner(Db, Db));
    CMatrix Dg = (I / b.hbar) * (x0(1) * Q - x0(0) * P).topLeftCorner(Db, Db);
    CVector vac = CVector::Zero(Db);
    vac(0) = 1.0;
    CVector phi = Dg.exp() * (K.exp() * vac);
    const double tail = phi.tail(Db - b.D).squaredNorm();
    if (tail > 1e-10) throw CapacityError("squeezed state truncation tail exceeds 1e-10; raise the Fock dimension");
    return normalized(phi.head(b.D), b);
}

WaveVector random_state(const FockBasis& b, std::uint64_t seed, int dof) {
    check_basis(b);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N01(0.0, 1.0);
    const int L = std::max(1, b.D / 3);
    if (dof == 1) {
        CVector psi = CVector::Zero(b.D);
        for (int n = 0; n < L; ++n) psi(n) = Complex(N01(rng), N01(rng));
        return normalized(psi, b, 1);
    }
    if (dof != 2) throw ConfigError("random_state supports one or two degrees of freedom");
    CVector psi = CVector::Zero(b.D * b.D);
    for (int n1 = 0; n1 < L; ++n1)
        for (int n2 = 0; n2 < L; ++n2) psi(n1 * b.D + n2) = Complex(N01(rng), N01(rng));
    return normalized(psi, b, 2);
}

CharacteristicProvider oracle_provider(const WaveVector& w, int extra) {
    if (w.dof != 1) throw ConfigError("oracle characteristic function implemented for one degree of freedom");
    const int Db = w.basis.D + extra;
    const SemiclassicalState s = moments_of(w, 2);
    const CMatrix Q = q_matrix(Db, w.basis.q_scale()) - s.x[0] * CMatrix::Identity(Db, Db);
    const CMatrix P = p_matrix(Db, w.basis.p_scale()) - s.x[1] * CMatrix::Identity(Db, Db);
    CVector psi = CVector::Zero(Db);
    psi.head(w.basis.D) = w.psi;
    CharacteristicProvider prov;
    prov.kind = "oracle";
    prov.dof = 1;
    prov.D = [Q, P, psi](const Eigen::VectorXd& al) {
        const CMatrix X = al(0) * Q + al(1) * P;
        Eigen::SelfAdjointEigenSolver<CMatrix> es(X);
        if (es.info() != Eigen::Success) throw InternalError("eigendecomposition failed");
        const CVector c = es.eigenvectors().adjoint() * psi;
        double v = 0.0;
        for (Eigen::Index i = 0; i < c.size(); ++i) v += std::norm(c(i)) * std::exp(es.eigenvalues()(i));
        return v;
    };
    return prov;
}

double tail_weight(const CVector& psi, int guard) {
    const int n = static_cast<int>(psi.size());
    const int from = std::max(0, n - guard);
    return std::sqrt(psi.tail(n - from).squaredNorm());
}

// ---------------------------------------------------------------------------

std::vector<std::vector<double>> hermite_coefficients(int order) {
    std::vector<std::vector<double>> h(order + 1, std::vector<double>(order + 1, 0.0));
    h[0][0] = 1.0;
    if (order >= 1) h[1][1] = 2.0;
    for (int n = 1; n < order; ++n)
        for (int l = 0; l <= order; ++l) {
            double v = -2.0 * n * h[n - 1][l];
            if (l > 0) v += 2.0 * h[n][l - 1];
            h[n + 1][l] = v;
        }
    return h;
}

std::function<double(double)> hamburger_density(const std::vector<double>& a, int order) {
    if (order < 0 || static_cast<int>(a.size()) < order + 1)
        throw ConfigError("Hamburger reconstruction needs order + 1 moments");
    const auto h = hermite_coefficients(order);
    std::vector<double> w(order + 1);
    double norm = std::sqrt(M_PI);
    for (int n = 0; n <= order; ++n) {
        double c = 0.0;
        for (int l = 0; l <= n; ++l) c += h[n][l] * a[l];
        if (n > 0) norm *= 2.0 * n;
        w[n] = c / norm;
    }
    return [w, order](double q) {
        double s = 0.0;
        for (int n = 0; n <= order; ++n) s += w[n] * boost::math::hermite(static_cast<unsigned>(n), q);
        return std::exp(-q * q) * s;
    };
}

std::function<double(double)> hamburger_phase(const std::vector<Complex>& b, const std::vector<double>& a,
                                              int order, double hbar) {
    if (static_cast<int>(b.size()) < order + 1) throw ConfigError("Hamburger phase needs order + 1 values b_n");
    std::vector<double> m(order + 1);
    for (int n = 0; n <= order; ++n) m[n] = b[n].real() / hbar;
    auto rho = hamburger_density(a, order);
    auto f = hamburger_density(m, order);
    return [rho, f](double q) {
        const double r = rho(q);
        if (!(r > 0.0)) throw DomainError("reconstructed density is not positive at the phase evaluation point");
        return f(q) / r;
    };
}

}  // namespace momentflow
