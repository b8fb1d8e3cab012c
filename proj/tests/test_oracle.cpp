#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "qes/oracle.hpp"
#include "qes/rng.hpp"

using namespace qes;

namespace {

BasicEquation random_qes(Rng& rng, int n) {
    BasicEquation eq;
    eq.alpha = rng.uniform(-2.0, 2.0);
    const double mag = rng.uniform(0.3, 3.0);
    eq.b2 = rng.uniform() < 0.5 ? -mag : mag;
    eq.b1 = rng.uniform(-3.0, 3.0);
    eq.b0 = rng.uniform(-3.0, 3.0);
    eq.c1 = -static_cast<double>(n) * eq.b2;
    return eq;
}

}  // namespace

TEST_CASE("restriction matrix entries at degree 1") {
    BasicEquation eq;
    eq.alpha = -2.0;  // does not enter the degree-1 matrix
    eq.b2 = -1.0;
    eq.b1 = 3.0;
    eq.b0 = 1.0;
    eq.c1 = 1.0;
    const InvariantMatrix im = invariant_matrix(eq, 1);
    CHECK(im.n == 1);
    CHECK(im.leakage == 0.0);
    CHECK(im.H(0, 0) == 0.0);
    CHECK(im.H(1, 0) == 1.0);
    CHECK(im.H(0, 1) == 1.0);
    CHECK(im.H(1, 1) == 3.0);
}

TEST_CASE("restriction matrix entries at degree 2 include the alpha band") {
    BasicEquation eq;
    eq.alpha = 0.5;
    eq.b2 = -2.0;
    eq.b1 = 1.5;
    eq.b0 = 0.25;
    eq.c1 = 4.0;
    const InvariantMatrix im = invariant_matrix(eq, 2);
    // column k holds T[t^k]
    CHECK(im.H(1, 0) == doctest::Approx(4.0));          // c1
    CHECK(im.H(0, 1) == doctest::Approx(0.25));         // b0
    CHECK(im.H(1, 1) == doctest::Approx(1.5));          // b1
    CHECK(im.H(2, 1) == doctest::Approx(4.0 - 2.0));    // b2 + c1
    CHECK(im.H(1, 2) == doctest::Approx(-0.5 * 2.0 + 0.5));  // -2 alpha + 2 b0
    CHECK(im.H(2, 2) == doctest::Approx(2.0 + 3.0));    // 2 + 2 b1
    CHECK(im.leakage == doctest::Approx(2.0 * -2.0 + 4.0));
}

TEST_CASE("leakage outside tolerance throws with the value in the message") {
    BasicEquation eq;
    eq.b2 = -1.0;
    eq.c1 = 0.5;  // leakage at n=1: -1 + 0.5 = -0.5
    try {
        invariant_matrix(eq, 1);
        FAIL("expected a throw");
    } catch (const std::domain_error& ex) {
        const std::string msg = ex.what();
        CHECK(msg.find("subspace not invariant") != std::string::npos);
        CHECK(msg.find("-0.5") != std::string::npos);
    }
}

TEST_CASE("leakage within tolerance is kept") {
    BasicEquation eq;
    eq.b2 = -1.0;
    eq.c1 = 3.0 + 1e-10;  // |leakage| = 1e-10 < 1e-9 * (1 + 3 + |c1|)
    const InvariantMatrix im = invariant_matrix(eq, 3);
    CHECK(std::abs(im.leakage) == doctest::Approx(1e-10));
}

TEST_CASE("degree-1 eigenpairs") {
    BasicEquation eq;
    eq.b2 = -1.0;
    eq.b1 = 3.0;
    eq.b0 = 1.0;
    eq.c1 = 1.0;
    const auto levels = oracle_solutions(eq, 1);
    REQUIRE(levels.size() == 2);
    const double lo = 0.5 * (3.0 - std::sqrt(13.0));
    const double hi = 0.5 * (3.0 + std::sqrt(13.0));
    CHECK(levels[0].c0.real() == doctest::Approx(lo));
    CHECK(levels[1].c0.real() == doctest::Approx(hi));
    for (const auto& lvl : levels) {
        CHECK(lvl.all_real);
        CHECK(!lvl.degenerate);
        REQUIRE(lvl.coeffs.size() == 2);
        CHECK(lvl.coeffs[1] == std::complex<double>(1.0, 0.0));  // monic
        REQUIRE(lvl.roots.size() == 1);
        // c0 = b2 t1 + b1  =>  t1 = 3 - c0
        CHECK(lvl.roots[0].real() ==
              doctest::Approx(3.0 - lvl.c0.real()));
        CHECK(lvl.roots[0].imag() == doctest::Approx(0.0));
    }
}

TEST_CASE("defective restriction is flagged degenerate") {
    // H = [[0, -1], [1, 2]] has the double eigenvalue 1 with a single
    // eigenvector: a Jordan block.
    BasicEquation eq;
    eq.alpha = 0.0;
    eq.b2 = -1.0;
    eq.b1 = 2.0;
    eq.b0 = -1.0;
    eq.c1 = 1.0;
    const auto levels = oracle_solutions(eq, 1);
    REQUIRE(levels.size() == 2);  // multiplicity is preserved
    for (const auto& lvl : levels) {
        CHECK(lvl.c0.real() == doctest::Approx(1.0));
        CHECK(lvl.degenerate);
        CHECK(lvl.roots.empty());
    }
}

TEST_CASE("every level satisfies the matrix eigenproblem") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3;
        const BasicEquation eq = random_qes(rng, n);
        const InvariantMatrix im = invariant_matrix(eq, n);
        const auto levels = oracle_solutions(eq, n);
        REQUIRE(levels.size() == static_cast<std::size_t>(n + 1));
        for (const auto& lvl : levels) {
            if (lvl.degenerate) continue;
            Eigen::VectorXcd v(n + 1);
            for (int k = 0; k <= n; ++k) v(k) = lvl.coeffs[k];
            const Eigen::VectorXcd hv = im.H.cast<std::complex<double>>() * v;
            const double dev = (hv - lvl.c0 * v).lpNorm<Eigen::Infinity>();
            CHECK(dev < 1e-10 * (1.0 + std::abs(lvl.c0)));
        }
    }
}

TEST_CASE("real levels are consistent with the root-sum eigenvalue formula") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 5;
        const BasicEquation eq = random_qes(rng, n);
        const auto levels = oracle_solutions(eq, n);
        REQUIRE(levels.size() == static_cast<std::size_t>(n + 1));
        for (const auto& lvl : levels) {
            if (!lvl.all_real || lvl.degenerate) continue;
            std::vector<double> roots;
            for (const auto& z : lvl.roots) roots.push_back(z.real());
            CHECK(std::abs(c0_from_roots(eq, roots) - lvl.c0.real()) <
                  1e-8 * (1.0 + std::abs(lvl.c0)));
        }
    }
}

TEST_CASE("poly_roots") {
    // (t-1)(t-2)(t-3) = -6 + 11 t - 6 t^2 + t^3
    auto roots = poly_roots({-6.0, 11.0, -6.0, 1.0});
    REQUIRE(roots.size() == 3);
    std::sort(roots.begin(), roots.end(),
              [](auto a, auto b) { return a.real() < b.real(); });
    CHECK(roots[0].real() == doctest::Approx(1.0));
    CHECK(roots[1].real() == doctest::Approx(2.0));
    CHECK(roots[2].real() == doctest::Approx(3.0));
    for (const auto& z : roots) CHECK(std::abs(z.imag()) < 1e-12);

    // t^2 + 1 -> +- i
    auto ri = poly_roots({1.0, 0.0, 1.0});
    REQUIRE(ri.size() == 2);
    CHECK(std::abs(ri[0].imag()) == doctest::Approx(1.0));

    CHECK_THROWS_WITH_AS(poly_roots({1.0, 1.0, 0.0}),
                         "degree deflation required", std::domain_error);
    CHECK_THROWS_WITH_AS(poly_roots({1.0, 1.0, 1e-15}),
                         "degree deflation required", std::domain_error);
}
