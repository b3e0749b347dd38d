#include "gen.hpp"

#include "momentflow/dynamics.hpp"
#include "momentflow/errors.hpp"
#include "momentflow/oracle.hpp"
#include "momentflow/uncertainty.hpp"

#include <doctest.h>

#include <cmath>

using namespace momentflow;

TEST_CASE("ground and number state moments") {
    const FockBasis b{40, 1.0, 1.0, 1.0};
    const auto g = moments_of(ground_state(b), 4);
    CHECK(g.get(0, 2) == doctest::Approx(0.5));
    CHECK(g.get(2, 2) == doctest::Approx(0.5));
    CHECK(g.get(0, 4) == doctest::Approx(0.75));
    const auto n1 = moments_of(number_state(1, b), 2);
    CHECK(n1.get(0, 2) == doctest::Approx(1.5));
    CHECK(n1.get(1, 2) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("canonical commutator") {
    const FockBasis b{40, 1.3, 0.7, 0.4};
    const WeylExpectations X(random_state(b, 3));
    CHECK(X.commutator({1}, {0}, {0}, {1}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(X.commutator({2}, {0}, {0}, {2}) == doctest::Approx(4.0 * X.expect({1}, {1}, false)).epsilon(1e-10));
}

TEST_CASE("coherent state matches the dimensionful coherent moments") {
    const FockBasis b{80, 2.0, 0.5, 0.3};
    const auto w = coherent_at(0.7, -0.4, b);
    const auto o = moments_of(w, 4);
    const auto s = coherent_state(0.7, -0.4, 0.3, 2.0, 0.5, 4);
    CHECK(o.x[0] == doctest::Approx(0.7));
    CHECK(o.x[1] == doctest::Approx(-0.4));
    for (int n = 2; n <= 4; ++n)
        for (int a = 0; a <= n; ++a) CHECK(o.get(a, n) == doctest::Approx(s.get(a, n)).scale(1.0).epsilon(1e-10));
}

TEST_CASE("random states are normalized and reproducible") {
    const FockBasis b{30, 1.0, 1.0, 1.0};
    const auto a = random_state(b, 11), c = random_state(b, 11);
    CHECK(a.norm() == doctest::Approx(1.0));
    CHECK((a.psi - c.psi).norm() == 0.0);
    CHECK(tail_weight(a.psi) == 0.0);
    CHECK((random_state(b, 12).psi - a.psi).norm() > 0.1);
}

TEST_CASE("propagation is unitary and periodic for the oscillator") {
    const FockBasis b{40, 1.0, 1.0, 1.0};
    const auto H = hamiltonian_matrix(ClassicalHamiltonian::harmonic(1.0, 1.0), b);
    const Propagator U(H);
    const auto w = random_state(b, 5);
    const CVector v = U.evolve(w.psi, 2.0 * M_PI);
    CHECK(v.norm() == doctest::Approx(1.0));
    CHECK(std::abs(w.psi.dot(v)) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(U.energies()(0) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("oracle outside coverage") {
    const FockBasis b{40, 1.0, 1.0, 1.0};
    CHECK_THROWS_AS(hamiltonian_matrix(ClassicalHamiltonian::cosmology(1, 1, 1), b), ConfigError);
    CHECK_FALSE(capacity_warning(20, 4).empty());
    CHECK(capacity_warning(120, 4).empty());
}

TEST_CASE("oracle characteristic function of the ground state") {
    const FockBasis b{40, 1.0, 1.0, 1.0};
    const auto prov = oracle_provider(ground_state(b));
    Eigen::VectorXd al(2);
    al << 0.3, -0.2;
    CHECK(prov.D(al) == doctest::Approx(std::exp(0.25 * (0.09 + 0.04))).epsilon(1e-10));
    const auto gp = gaussian_provider(moments_of(ground_state(b), 2));
    CHECK(gp.D(al) == doctest::Approx(prov.D(al)).epsilon(1e-10));
}

TEST_CASE("property: generating-function uncertainty on random states") {
    const FockBasis b{24, 1.0, 1.0, 1.0};
    for (int s = 0; s < 10; ++s) {
        const auto prov = oracle_provider(random_state(b, 100 + s));
        Eigen::VectorXd al(2), be(2);
        al << testgen::uniform(-0.4, 0.4), testgen::uniform(-0.4, 0.4);
        be << testgen::uniform(-0.4, 0.4), testgen::uniform(-0.4, 0.4);
        CHECK(check_uncertainty_generating(prov, al, be, b.hbar) >= -1e-10);
    }
}

TEST_CASE("Hamburger reconstruction of the ground state") {
    const auto h = hermite_coefficients(3);
    CHECK(h[2][2] == doctest::Approx(4.0));
    CHECK(h[2][0] == doctest::Approx(-2.0));
    CHECK(h[3][1] == doctest::Approx(-12.0));
    // <q^l> of e^{-q^2}/sqrt(pi)
    const std::vector<double> a{1.0, 0.0, 0.5, 0.0, 0.75};
    const auto rho = hamburger_density(a, 4);
    for (double q : {-1.0, 0.0, 0.6}) CHECK(rho(q) == doctest::Approx(std::exp(-q * q) / std::sqrt(M_PI)).epsilon(1e-12));
}
