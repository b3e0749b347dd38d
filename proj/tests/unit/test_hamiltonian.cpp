#include "gen.hpp"

#include "momentflow/dynamics.hpp"
#include "momentflow/errors.hpp"
#include "momentflow/hamiltonian.hpp"

#include <doctest.h>

#include <cmath>

using namespace momentflow;

TEST_CASE("classical derivatives") {
    const auto H = ClassicalHamiltonian::quartic(2.0, 0.5, 0.3);
    const double q = 0.7, p = -1.1;
    CHECK(H.value(q, p) == doctest::Approx(p * p / 4.0 + 0.25 * q * q + 0.3 * std::pow(q, 4) / 24.0));
    CHECK(H.derivative(0, 2, q, p) == doctest::Approx(0.5));
    CHECK(H.derivative(4, 0, q, p) == doctest::Approx(0.3));
    CHECK(H.derivative_vanishes(5, 0));
    CHECK(H.derivative_vanishes(1, 1));
    CHECK_FALSE(H.derivative_vanishes(3, 0));
}

TEST_CASE("cosmology Hamiltonian") {
    const auto H = ClassicalHamiltonian::cosmology(1.0, 1.0, 1.0);
    CHECK(H.symplectic_scale() == doctest::Approx(1.0 / 3.0));
    const double c = 0.4, p = 2.0;
    CHECK(H.value(c, p) == doctest::Approx(-3.0 * c * c * std::sqrt(p) + 1.0));
}

TEST_CASE("quantum Hamiltonian terms") {
    const auto HQ = expand_quantum_hamiltonian(ClassicalHamiltonian::quartic(1.0, 1.0, 0.2), 4);
    // order 2: G^{0,2} and G^{2,2}; order 3: G^{0,3}; order 4: G^{0,4}
    bool has04 = false, has13 = false;
    for (const auto& t : HQ.terms) {
        if (t.a == 0 && t.n == 4) {
            has04 = true;
            CHECK(t.weight == Rational(1, 24));
        }
        if (t.a == 1 && t.n == 3) has13 = true;
    }
    CHECK(has04);
    CHECK_FALSE(has13);
    const auto s = coherent_state(0.5, 0.1, 0.2, 1.0, 1.0, 4);
    const double classical = ClassicalHamiltonian::quartic(1.0, 1.0, 0.2).value(0.5, 0.1);
    CHECK(HQ.value(s) > classical);
}

TEST_CASE("dimensionless moments round trip") {
    for (int k = 0; k < 50; ++k) {
        const int n = testgen::integer(2, 6), a = testgen::integer(0, n);
        const double v = testgen::uniform(-3, 3), hbar = testgen::uniform(0.01, 2), m = testgen::uniform(0.2, 4),
                     om = testgen::uniform(0.2, 4);
        CHECK(from_dimensionless(to_dimensionless(v, a, n, hbar, m, om), a, n, hbar, m, om) ==
              doctest::Approx(v).epsilon(1e-12));
    }
}

TEST_CASE("closure names") {
    CHECK(parse_closure("zero") == ClosurePolicy::Zero);
    CHECK(parse_closure("gaussian-factorize") == ClosurePolicy::GaussianFactorize);
    CHECK(closure_name(ClosurePolicy::GaussianFactorize) == "gaussian-factorize");
    CHECK_THROWS_AS(parse_closure("nope"), ConfigError);
}

TEST_CASE("harmonic equations") {
    EomOptions eo;
    eo.n_max = 2;
    const auto sys = generate_eom(expand_quantum_hamiltonian(ClassicalHamiltonian::harmonic(1.0, 2.0), 2), eo);
    CHECK(sys.size() == 5);
    CHECK(sys.names()[2] == "G_0_2");
    CHECK(moment_column(1, 3) == "G_1_3");
    CHECK(sys.slot(2, 2) == 4);
    std::vector<double> y{1.0, 0.5, 0.3, 0.1, 0.4}, dy;
    sys.rhs(y, dy, 1.0);
    CHECK(dy[0] == doctest::Approx(0.5));
    CHECK(dy[1] == doctest::Approx(-4.0));
    CHECK(dy[2] == doctest::Approx(2.0 * 0.1));
    CHECK(dy[3] == doctest::Approx(0.4 - 4.0 * 0.3));
    CHECK(dy[4] == doctest::Approx(-2.0 * 4.0 * 0.1));
}

TEST_CASE("quartic couples q to moments") {
    EomOptions eo;
    eo.n_max = 3;
    const auto sys = generate_eom(expand_quantum_hamiltonian(ClassicalHamiltonian::quartic(1.0, 1.0, 0.1), 3), eo);
    CHECK(sys.depends_on(1, sys.slot(0, 2)));
    CHECK_FALSE(sys.depends_on(0, sys.slot(0, 2)));
}

TEST_CASE("listing is deterministic") {
    const auto make = [] {
        return generate_eom(expand_quantum_hamiltonian(ClassicalHamiltonian::quartic(1.0, 1.0, 0.1), 3)).listing();
    };
    CHECK(make() == make());
}
