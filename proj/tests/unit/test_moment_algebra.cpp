#include "gen.hpp"

#include "momentflow/dynamics.hpp"
#include "momentflow/moment_algebra.hpp"

#include <doctest.h>

using namespace momentflow;

namespace {

MomentPolynomial G(int a, int n) { return MomentPolynomial::moment(MomentIndex::single(a, n)); }

bool is_zero(const MomentPolynomial& P) {
    for (const auto& [m, c] : P.terms())
        if (c != Rational(0)) return false;
    return true;
}

}  // namespace

TEST_CASE("index enumeration") {
    for (int n = 2; n <= 6; ++n) CHECK(indices_of_order(n, 1).size() == static_cast<std::size_t>(n + 1));
    // (n+3 choose 3) for two degrees of freedom
    CHECK(indices_of_order(2, 2).size() == 10);
    CHECK(indices_of_order(3, 2).size() == 20);
    for (const auto& i : indices_of_order(4, 2)) CHECK(i.order() == 4);
}

TEST_CASE("symplectic matrix") {
    const auto e = symplectic_matrix(2);
    CHECK(e[0][1] == 1);
    CHECK(e[1][0] == -1);
    CHECK(e[2][3] == 1);
    CHECK(e[0][2] == 0);
}

TEST_CASE("order-2 brackets") {
    CHECK(bracket_moments(MomentIndex::single(0, 2), MomentIndex::single(2, 2)) == G(1, 2) * Rational(4));
    CHECK(bracket_moments(MomentIndex::single(0, 2), MomentIndex::single(1, 2)) == G(0, 2) * Rational(2));
    CHECK(bracket_moments(MomentIndex::single(1, 2), MomentIndex::single(2, 2)) == G(2, 2) * Rational(2));
    CHECK(bracket_moments(MomentIndex::single(0, 2), MomentIndex::single(2, 2)).str() == "4G^{1,2}");
}

TEST_CASE("brackets with coordinates vanish") {
    for (int n = 2; n <= 5; ++n)
        for (int a = 0; a <= n; ++a) {
            CHECK(is_zero(bracket_mixed(0, MomentIndex::single(a, n))));
            CHECK(is_zero(bracket_mixed(1, MomentIndex::single(a, n))));
        }
}

TEST_CASE("bracket output order") {
    for (int n = 2; n <= 4; ++n)
        for (int m = 2; m <= 4; ++m)
            for (int a = 0; a <= n; ++a)
                for (int b = 0; b <= m; ++b) CHECK(bracket_moments(MomentIndex::single(a, n), MomentIndex::single(b, m)).max_moment_order() <= n + m - 2);
}

TEST_CASE("property: antisymmetry") {
    for (int k = 0; k < 200; ++k) {
        const int dof = testgen::integer(1, 2);
        const auto i = testgen::index(2, 4, dof), j = testgen::index(2, 4, dof);
        CHECK(is_zero(bracket_moments(i, j) + bracket_moments(j, i)));
    }
}

TEST_CASE("property: Jacobi identity") {
    for (int k = 0; k < 40; ++k) {
        const auto A = MomentPolynomial::moment(testgen::index(2, 3, 1));
        const auto B = MomentPolynomial::moment(testgen::index(2, 3, 1));
        const auto C = MomentPolynomial::moment(testgen::index(2, 3, 1));
        const auto J = bracket_general(A, bracket_general(B, C)) + bracket_general(B, bracket_general(C, A)) +
                       bracket_general(C, bracket_general(A, B));
        CHECK(is_zero(J));
    }
}

TEST_CASE("property: Leibniz rule") {
    for (int k = 0; k < 40; ++k) {
        const auto A = MomentPolynomial::moment(testgen::index(2, 3, 1));
        const auto B = MomentPolynomial::moment(testgen::index(2, 3, 1));
        const auto C = MomentPolynomial::moment(testgen::index(2, 3, 1));
        const auto lhs = bracket_general(A, B * C);
        const auto rhs = bracket_general(A, B) * C + B * bracket_general(A, C);
        CHECK(is_zero(lhs - rhs));
    }
}

TEST_CASE("evaluation and order-2 uncertainty") {
    const auto s = coherent_state(0.2, -0.4, 0.3, 1.0, 1.0, 4);
    CHECK(evaluate(G(0, 2) * Rational(3), s) == doctest::Approx(3.0 * 0.15));
    CHECK(check_uncertainty_order2(s) == doctest::Approx(0.0).epsilon(1e-14));
    SemiclassicalState bad = s;
    bad.set(0, 2, 0.01);
    CHECK(check_uncertainty_order2(bad) < 0.0);
}
