#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "qes/basic_equation.hpp"
#include "qes/rng.hpp"

using namespace qes;

namespace {
const double kSqrt13 = std::sqrt(13.0);
}

TEST_CASE("linear solution of a degree-1 equation has zero residual") {
    // b2 t^2 + b1 t + b0 = -t^2 + 3t + 1 vanishes at t1 = (3 + sqrt 13)/2,
    // so S = t - t1 solves the equation with c0 = b2 t1 + b1 = 3 - t1.
    BasicEquation eq;
    eq.alpha = -2.0;
    eq.b2 = -1.0;
    eq.b1 = 3.0;
    eq.b0 = 1.0;
    eq.c1 = 1.0;
    const double t1 = 0.5 * (3.0 + kSqrt13);
    eq.c0 = 3.0 - t1;
    const Polynomial S = Polynomial::monic_from_roots({t1});
    for (double t : {0.5, 1.0, 2.0}) CHECK(std::abs(residual(eq, S, t)) < 1e-12);

    // the other branch pairs with the other eigenvalue
    const double t2 = 0.5 * (3.0 - kSqrt13);
    BasicEquation eq2 = eq;
    eq2.c0 = 3.0 - t2;
    const Polynomial S2 = Polynomial::monic_from_roots({t2});
    for (double t : {0.5, 1.0, 2.0}) CHECK(std::abs(residual(eq2, S2, t)) < 1e-12);

    // mixing the branches leaves a nonzero residual
    CHECK(std::abs(residual(eq, S2, 0.5)) > 0.1);
}

TEST_CASE("constant solution residual is c1 t - c0") {
    BasicEquation eq;
    eq.b2 = -1.0;
    eq.c1 = 0.0;
    eq.c0 = 1.0;
    const Polynomial one({1.0});
    CHECK(residual(eq, one, 0.7) == doctest::Approx(-1.0));
    eq.c1 = 2.0;
    CHECK(residual(eq, one, 0.7) == doctest::Approx(2.0 * 0.7 - 1.0));
}

TEST_CASE("c0_from_roots") {
    BasicEquation eq;
    eq.b2 = -1.0;
    eq.b1 = 0.5;
    CHECK(c0_from_roots(eq, {}) == 0.0);
    CHECK(c0_from_roots(eq, {1.0, 2.0}) ==
          doctest::Approx(2.0 - 3.0 + 2.0 * 0.5));
    eq.b1 = 3.0;
    const double t1 = 0.5 * (3.0 + kSqrt13);
    CHECK(c0_from_roots(eq, {t1}) == doctest::Approx(3.0 - t1));
}

TEST_CASE("qes_degree") {
    BasicEquation eq;
    eq.b2 = -1.0;

    eq.c1 = 3.0;
    REQUIRE(qes_degree(eq).has_value());
    CHECK(*qes_degree(eq) == 3);

    eq.c1 = 0.0;
    REQUIRE(qes_degree(eq).has_value());
    CHECK(*qes_degree(eq) == 0);

    // absolute 1e-9 tolerance on the ratio
    eq.c1 = 3.0 + 5e-10;
    REQUIRE(qes_degree(eq).has_value());
    CHECK(*qes_degree(eq) == 3);
    eq.c1 = 3.0 + 1e-8;
    CHECK(!qes_degree(eq).has_value());

    // negative target degree
    eq.c1 = -2.0;
    CHECK(!qes_degree(eq).has_value());

    // no quadratic drift term at all
    eq.b2 = 0.0;
    eq.c1 = 1.0;
    CHECK(!qes_degree(eq).has_value());
}

TEST_CASE("forward map worked example") {
    BasicEquation eq;
    eq.alpha = 2.0;
    eq.b2 = -4.0;
    eq.b1 = 3.0;
    eq.b0 = 1.0;
    eq.c1 = 8.0;
    eq.c0 = 5.0;
    const GsweParams g = to_gswe(eq);
    CHECK(g.t0 == 2.0);
    CHECK(g.omega.real() == 0.0);
    CHECK(g.omega.imag() == doctest::Approx(2.0));
    CHECK(g.k.real() == 0.0);
    CHECK(g.k.imag() == doctest::Approx(-0.5));
    CHECK(g.B1 == doctest::Approx(1.0));
    CHECK(g.B2 == doctest::Approx(-5.0));
    CHECK(g.B3 == doctest::Approx(-7.0));
}

TEST_CASE("inverse map worked example") {
    GsweParams g;
    g.t0 = 1.0;
    g.omega = {0.0, -0.5};
    g.k = {0.0, 1.0};
    g.B1 = 2.0;
    g.B2 = 4.0;
    g.B3 = -2.0;
    const BasicEquation eq = from_gswe(g);
    CHECK(eq.alpha == doctest::Approx(1.0));
    CHECK(eq.b2 == doctest::Approx(1.0));
    CHECK(eq.b1 == doctest::Approx(3.0));
    CHECK(eq.b0 == doctest::Approx(2.0));
    CHECK(eq.c1 == doctest::Approx(1.0));
    CHECK(eq.c0 == doctest::Approx(0.0));
}

TEST_CASE("round trip through the spheroidal form") {
    Rng rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        BasicEquation eq;
        eq.alpha = rng.uniform(-2.0, 2.0);
        do {
            eq.b2 = rng.uniform(-2.0, 2.0);
        } while (std::abs(eq.b2) < 0.1);
        eq.b1 = rng.uniform(-2.0, 2.0);
        eq.b0 = rng.uniform(-2.0, 2.0);
        eq.c1 = rng.uniform(-2.0, 2.0);
        eq.c0 = rng.uniform(-2.0, 2.0);

        const BasicEquation back = from_gswe(to_gswe(eq));
        const double mag = std::max(
            {std::abs(eq.alpha), std::abs(eq.b2), std::abs(eq.b1),
             std::abs(eq.b0), std::abs(eq.c1), std::abs(eq.c0)});
        const double tol = 1e-14 * (1.0 + mag);
        CHECK(std::abs(back.alpha - eq.alpha) <= tol);
        CHECK(std::abs(back.b2 - eq.b2) <= tol);
        CHECK(std::abs(back.b1 - eq.b1) <= tol);
        CHECK(std::abs(back.b0 - eq.b0) <= tol);
        CHECK(std::abs(back.c1 - eq.c1) <= tol);
        CHECK(std::abs(back.c0 - eq.c0) <= tol);
    }
}

TEST_CASE("map error conditions") {
    BasicEquation flat;  // b2 == 0
    flat.b1 = 1.0;
    CHECK_THROWS_WITH_AS(to_gswe(flat), "degenerate exponential scaling",
                         std::domain_error);

    GsweParams g;
    g.omega = {0.0, 0.0};
    CHECK_THROWS_WITH_AS(from_gswe(g), "degenerate exponential scaling",
                         std::domain_error);

    g.omega = {0.5, 1.0};  // genuinely complex scaling
    CHECK_THROWS_WITH_AS(from_gswe(g), "complex basic equation unsupported",
                         std::domain_error);

    g.omega = {0.0, 1.0};
    g.k = {0.5, 0.0};
    CHECK_THROWS_WITH_AS(from_gswe(g), "complex basic equation unsupported",
                         std::domain_error);
}

TEST_CASE("polynomial basics used throughout") {
    const Polynomial p({1.0, -2.0, 1.0});  // (t-1)^2
    CHECK(p.degree() == 2);
    CHECK(p.eval(1.0) == 0.0);
    CHECK(p.eval(3.0) == doctest::Approx(4.0));
    const Polynomial dp = p.derivative();
    CHECK(dp.degree() == 1);
    CHECK(dp.eval(3.0) == doctest::Approx(4.0));

    const Polynomial m = Polynomial::monic_from_roots({1.0, 2.0});
    CHECK(m.coeffs() == std::vector<double>{2.0, -3.0, 1.0});
    CHECK(m.times_t().coeffs() == std::vector<double>{0.0, 2.0, -3.0, 1.0});

    const std::complex<double> z(0.0, 1.0);
    CHECK(std::abs(m.eval(z) - (z - 1.0) * (z - 2.0)) < 1e-15);
}
