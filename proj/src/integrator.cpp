#include "momentflow/integrator.hpp"

#include "momentflow/errors.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace momentflow {

namespace odeint = boost::numeric::odeint;
using State = std::vector<double>;

std::vector<double> time_grid(double t0, double t1, int samples) {
    if (samples < 2) throw ConfigError("time grid needs at least 2 samples");
    std::vector<double> t(samples);
    for (int i = 0; i < samples; ++i) t[i] = t0 + (t1 - t0) * double(i) / double(samples - 1);
    t.back() = t1;
    return t;
}

namespace {

struct Stop {
    int code;
    std::string what;
    double t;
};

std::string at_time(double t) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    os << t;
    return os.str();
}

}  // namespace

OdeSolution solve_ode(const OdeRhs& f_in, State y0, const std::vector<double>& times_in,
                      const IntegratorOptions& opt) {
    if (!(opt.abs_tol > 0.0) || !(opt.rel_tol > 0.0)) throw ConfigError("tolerances must be positive");
    if (times_in.size() < 1) throw ConfigError("no sample times");
    const bool backward = times_in.size() > 1 && times_in.back() < times_in.front();
    const double dir = backward ? -1.0 : 1.0;
    std::vector<double> times(times_in.size());
    for (std::size_t i = 0; i < times.size(); ++i) times[i] = dir * times_in[i];
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1])) throw ConfigError("sample times must be strictly monotone");

    if (opt.fixed_step && !(opt.dt > 0.0)) throw ConfigError("fixed step dt must be positive");

    OdeSolution sol;
    sol.stats.abs_tol = opt.abs_tol;
    sol.stats.rel_tol = opt.rel_tol;
    sol.stats.fixed_step = opt.fixed_step;

    auto sys = [&](const State& y, State& dy, double tau) {
        ++sol.stats.rhs_evals;
        f_in(y, dy, dir * tau);
        for (auto& v : dy) {
            if (!std::isfinite(v)) throw DomainError("non-finite right-hand side at t = " + at_time(dir * tau));
            v *= dir;
        }
    };
    auto record = [&](double tau, const State& y) {
        sol.t.push_back(dir * tau);
        sol.y.push_back(y);
    };
    auto stop = [&](const Stop& s) {
        sol.complete = false;
        sol.error_code = s.code;
        sol.error = s.what;
        sol.stop_time = s.t;
    };

    record(times[0], y0);
    if (times.size() == 1) return sol;
    double t_now = times[0];
    try {
        if (opt.fixed_step) {
            odeint::runge_kutta_dopri5<State> rk;
            State y = y0;
            for (std::size_t i = 1; i < times.size(); ++i) {
                const double span = times[i] - times[i - 1];
                const long n = std::max(1L, static_cast<long>(std::ceil(span / opt.dt - 1e-12)));
                const double h = span / double(n);
                for (long k = 0; k < n; ++k) {
                    rk.do_step(sys, y, times[i - 1] + double(k) * h, h);
                    ++sol.stats.steps;
                    t_now = times[i - 1] + double(k + 1) * h;
                }
                record(times[i], y);
            }
            return sol;
        }
        using Dopri = odeint::runge_kutta_dopri5<State>;
        auto dense = opt.max_dt > 0.0 ? odeint::make_dense_output(opt.abs_tol, opt.rel_tol, opt.max_dt, Dopri())
                                      : odeint::make_dense_output(opt.abs_tol, opt.rel_tol, Dopri());
        const double dt0 = std::min(opt.initial_dt, times.back() - times.front());
        dense.initialize(y0, times[0], dt0);
        std::size_t next = 1;
        State yi(y0.size());
        long evals_before = sol.stats.rhs_evals;
        while (next < times.size()) {
            auto [t0, t1] = dense.do_step(sys);
            ++sol.stats.steps;
            t_now = t1;
            while (next < times.size() && times[next] <= t1) {
                dense.calc_state(times[next], yi);
                record(times[next], yi);
                ++next;
            }
            const double h = dense.current_time_step();
            if (next < times.size() && std::abs(h) < opt.min_dt * std::max(1.0, std::abs(t1)))
                throw StiffnessError("step size underflow at t = " + at_time(dir * t1), dir * t1);
            (void)t0;
        }
        // dopri5 is FSAL: 6 fresh evaluations per attempt plus one to start.
        const long attempts = (sol.stats.rhs_evals - evals_before - 1) / 6;
        sol.stats.rejected = std::max(0L, attempts - sol.stats.steps);
    } catch (const StiffnessError& e) {
        stop({static_cast<int>(ErrorKind::Domain), e.what(), e.time()});
    } catch (const odeint::step_adjustment_error& e) {
        stop({static_cast<int>(ErrorKind::Domain),
              std::string("step size underflow at t = ") + at_time(dir * t_now), dir * t_now});
    } catch (const Error& e) {
        stop({e.exit_code(), e.what(), dir * t_now});
    }
    return sol;
}

}  // namespace momentflow
