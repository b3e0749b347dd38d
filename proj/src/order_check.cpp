#include "momentflow/order_check.hpp"

#include "momentflow/dynamics.hpp"
#include "momentflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

namespace momentflow {

namespace {

struct Sample {
    std::vector<double> mismatch;
    double xh_norm2 = 0.0;
};

// Embedded state and pushforward of the effective vector field, then X_H.
Sample evaluate_point(const EquationSystem& sys, const ClassicalHamiltonian& H, double hbar, double q, double v,
                      const OrderCheckOptions& opt) {
    const int N = sys.size();
    std::vector<double> y(N, 0.0), push(N, 0.0);
    const double m = H.m, om = H.omega;
    y[0] = q;
    y[1] = m * v;
    push[0] = v;
    double acc = -H.derivative(1, 0, q, m * v) / m;
    AdiabaticMoments M;
    if (opt.embedding == Embedding::Adiabatic) {
        acc = effective_acceleration(q, v, hbar, opt.adiabatic, H);
        M = adiabatic_moments(q, v, acc, opt.adiabatic, H);
    }
    push[1] = m * acc;
    for (int k = 2; k < N; ++k) {
        const MomentIndex idx = sys.index_of_slot(k);
        const int n = idx.order(), a = idx.a();
        switch (opt.embedding) {
            case Embedding::Coherent:
                y[k] = from_dimensionless(coherent_moment_tilde(a, n), a, n, hbar, m, om);
                break;
            case Embedding::ConstantG:
                y[k] = coherent_moment_tilde(a, n) * std::pow(hbar, 0.5 * n);
                break;
            case Embedding::Adiabatic:
                if (n == 2) {
                    y[k] = from_dimensionless(M.total(a), a, n, hbar, m, om);
                    push[k] = from_dimensionless(M.dG0[a] + M.dG1[a], a, n, hbar, m, om);
                } else {
                    y[k] = from_dimensionless(g0_moments(q, n, a, opt.adiabatic, H), a, n, hbar, m, om);
                }
                break;
        }
    }
    std::vector<double> xh;
    sys.rhs(y, xh, hbar);
    Sample s;
    s.mismatch.resize(N);
    for (int k = 0; k < N; ++k) {
        s.mismatch[k] = xh[k] - push[k];
        s.xh_norm2 += xh[k] * xh[k];
    }
    return s;
}

std::vector<std::array<double, 2>> default_points(Embedding e) {
    if (e == Embedding::ConstantG) return {{{0.5, 0.3}}, {{-1.0, 1.0}}, {{2.0, -0.5}}};
    return {{{1.0, 0.0}}, {{0.5, 0.3}}, {{-0.7, -0.4}}};
}

std::vector<double> default_hbars() {
    std::vector<double> h;
    for (int i = 0; i < 5; ++i) h.push_back(std::pow(10.0, -3.0 + 0.5 * i));
    return h;
}

EquationSystem full_system(const ClassicalHamiltonian& H, const OrderCheckOptions& opt) {
    if (H.kind != ClassicalHamiltonian::Kind::Oscillator) throw ConfigError("order_check needs an oscillator-family model");
    if (opt.embedding != Embedding::ConstantG && !(H.omega > 0.0))
        throw ConfigError("embedding '" + embedding_name(opt.embedding) + "' needs omega > 0");
    if (opt.n_eff < 2) throw ConfigError("order_check needs n_eff >= 2");
    const int n_full = opt.n_eff + 2;
    EomOptions eo;
    eo.n_max = n_full;
    eo.closure = ClosurePolicy::Zero;
    return generate_eom(expand_quantum_hamiltonian(H, n_full), eo);
}

}  // namespace

Embedding parse_embedding(const std::string& s) {
    if (s == "coherent") return Embedding::Coherent;
    if (s == "adiabatic") return Embedding::Adiabatic;
    if (s == "constant") return Embedding::ConstantG;
    throw ConfigError("unknown embedding '" + s + "' (coherent, adiabatic, constant)");
}

std::string embedding_name(Embedding e) {
    switch (e) {
        case Embedding::Coherent: return "coherent";
        case Embedding::Adiabatic: return "adiabatic";
        case Embedding::ConstantG: return "constant";
    }
    return "?";
}

std::vector<double> order_mismatch_components(const ClassicalHamiltonian& H, double hbar, double q, double qdot,
                                              const OrderCheckOptions& opt) {
    const EquationSystem sys = full_system(H, opt);
    return evaluate_point(sys, H, hbar, q, qdot, opt).mismatch;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope needs >= 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("loglog_slope needs positive data");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int thread_cap() {
    if (const char* env = std::getenv("MOMENTFLOW_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min<long>(v, 256));
        throw ConfigError("MOMENTFLOW_THREADS must be a positive integer");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

OrderCheckResult order_check(const ClassicalHamiltonian& H, const OrderCheckOptions& opt) {
    opt.adiabatic.validate();
    OrderCheckResult r;
    r.hbars = opt.hbars.empty() ? default_hbars() : opt.hbars;
    std::sort(r.hbars.begin(), r.hbars.end());
    if (r.hbars.size() < 4) throw ConfigError("order_check needs at least 4 hbar values");
    if (!(r.hbars.front() > 0.0)) throw ConfigError("order_check hbar values must be positive");
    if (r.hbars.back() / r.hbars.front() < 100.0 * (1.0 - 1e-12))
        throw ConfigError("order_check hbar values must span at least 2 decades");
    const auto points = opt.points.empty() ? default_points(opt.embedding) : opt.points;
    const EquationSystem sys = full_system(H, opt);

    const std::size_t G = r.hbars.size();
    r.mismatch.assign(G, 0.0);
    r.scale.assign(G, 0.0);
    std::vector<std::string> errors(G);
    std::vector<int> codes(G, 0);
    auto work = [&](std::size_t i) {
        try {
            double mm = 0.0, sc = 0.0;
            for (const auto& z : points) {
                const Sample s = evaluate_point(sys, H, r.hbars[i], z[0], z[1], opt);
                for (double c : s.mismatch) mm += c * c;
                sc += s.xh_norm2;
            }
            r.mismatch[i] = std::sqrt(mm);
            r.scale[i] = std::sqrt(sc);
        } catch (const Error& e) {
            errors[i] = e.what();
            codes[i] = e.exit_code();
        } catch (const std::exception& e) {
            errors[i] = e.what();
            codes[i] = static_cast<int>(ErrorKind::Internal);
        }
    };
    const int T = std::min<int>(opt.threads > 0 ? opt.threads : thread_cap(), static_cast<int>(G));
    if (T <= 1) {
        for (std::size_t i = 0; i < G; ++i) work(i);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < T; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < G; i += T) work(i);
            });
        for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < G; ++i)
        if (codes[i]) throw Error(static_cast<ErrorKind>(codes[i]), errors[i]);

    const double eps = std::numeric_limits<double>::epsilon();
    r.exact = true;
    for (std::size_t i = 0; i < G; ++i)
        if (r.mismatch[i] > 64.0 * eps * std::max(r.scale[i], 1.0)) r.exact = false;
    if (r.exact) {
        r.passed = true;
        r.verdict = "exact";
        return r;
    }
    for (double m : r.mismatch)
        if (!(m > 0.0)) {
            r.verdict = "mismatch vanishes on part of the grid; no slope";
            return r;
        }
    r.slope = loglog_slope(r.hbars, r.mismatch);
    r.passed = r.slope >= opt.k + 1 - 0.2;
    r.verdict = r.passed ? "order " + std::to_string(opt.k) + " confirmed"
                         : "failure: slope below " + std::to_string(opt.k + 1) + ", no effective system of order " +
                               std::to_string(opt.k);
    return r;
}

}  // namespace momentflow
