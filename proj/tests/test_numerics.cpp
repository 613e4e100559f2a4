#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qig/errors.hpp"
#include "qig/numerics.hpp"

using qig::QuadratureSpec;
using qig::SymMat2;

TEST_CASE("integrate handles smooth integrands to near machine accuracy") {
    const double third = qig::integrate([](double x) { return x * x; }, 0.0, 1.0);
    CHECK(std::abs(third - 1.0 / 3.0) < 1e-14);

    const double two = qig::integrate([](double x) { return std::sin(x); }, 0.0, M_PI);
    CHECK(std::abs(two - 2.0) < 1e-12);

    const double osc = qig::integrate([](double x) { return std::sin(x); }, 0.0, 20.0);
    CHECK(std::abs(osc - (1.0 - std::cos(20.0))) < 1e-11);
}

TEST_CASE("integrate resolves an integrable endpoint singularity") {
    // 1/sqrt(x) over (0,1]: the rule never samples the endpoints, so the
    // subdivision cascade alone must deliver the requested accuracy.
    const double v = qig::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
    CHECK(std::abs(v - 2.0) < 1e-9);
}

TEST_CASE("integrate honours coarse tolerance requests") {
    QuadratureSpec spec;
    spec.rel_tol = 1e-6;
    spec.abs_tol = 0.0;
    const double v = qig::integrate([](double x) { return std::exp(-x * x); }, -3.0, 3.0, spec);
    CHECK(std::abs(v - std::sqrt(M_PI) * std::erf(3.0)) < 1e-6);
}

TEST_CASE("integrate rejects invalid requests") {
    auto f = [](double x) { return x; };
    CHECK_THROWS_AS(qig::integrate(f, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(qig::integrate(f, 2.0, 1.0), std::invalid_argument);
    QuadratureSpec bad;
    bad.max_subdivisions = 0;
    CHECK_THROWS_AS(qig::integrate(f, 0.0, 1.0, bad), std::invalid_argument);
}

TEST_CASE("integrate reports non-convergence on a non-integrable singularity") {
    CHECK_THROWS_AS(qig::integrate([](double x) { return 1.0 / x; }, 0.0, 1.0),
                    qig::NonConvergence);
}

TEST_CASE("eigen2 on a hand-solvable matrix") {
    const auto f = qig::eigen2(SymMat2{2.0, 1.0, 2.0});
    CHECK(f.lambda_max == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(f.lambda_min == doctest::Approx(1.0).epsilon(1e-14));
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(f.v_max.x() == doctest::Approx(s).epsilon(1e-13));
    CHECK(f.v_max.y() == doctest::Approx(s).epsilon(1e-13));
    // v_min is the quarter-turn rotation of v_max, not an independent solve.
    CHECK(f.v_min.x() == doctest::Approx(-s).epsilon(1e-13));
    CHECK(f.v_min.y() == doctest::Approx(s).epsilon(1e-13));
}

TEST_CASE("eigen2 sign convention keeps the second component non-negative") {
    // The raw eigenvector of the largest eigenvalue is (1,-1)/sqrt(2); the
    // returned one must be flipped.
    const auto f = qig::eigen2(SymMat2{2.0, -1.0, 2.0});
    CHECK(f.v_max.y() > 0.0);
    CHECK(f.v_max.x() == doctest::Approx(-f.v_max.y()).epsilon(1e-13));

    // Diagonal matrix, second component of v_max exactly zero: the first
    // component decides the sign.
    const auto d = qig::eigen2(SymMat2{5.0, 0.0, 1.0});
    CHECK(d.v_max.x() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d.v_max.y() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(d.lambda_max == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("eigen2 degenerate matrix falls back to the coordinate frame") {
    const auto f = qig::eigen2(SymMat2{3.0, 0.0, 3.0});
    CHECK(f.lambda_max == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(f.lambda_min == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(f.v_max.x() == doctest::Approx(1.0));
    CHECK(f.v_max.y() == doctest::Approx(0.0));
}

TEST_CASE("eigen2 satisfies the eigen equations on random matrices") {
    std::mt19937_64 rng(42);
    auto u = [&] { return -1.0 + 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int i = 0; i < 200; ++i) {
        SymMat2 g{3.0 * u(), 3.0 * u(), 3.0 * u()};
        const auto f = qig::eigen2(g);
        const double scale = std::abs(g.a11) + std::abs(g.a12) + std::abs(g.a22) + 1.0;
        CHECK(f.lambda_max >= f.lambda_min);
        CHECK((g.matrix() * f.v_max - f.lambda_max * f.v_max).norm() < 1e-12 * scale);
        CHECK((g.matrix() * f.v_min - f.lambda_min * f.v_min).norm() < 1e-12 * scale);
        CHECK(std::abs(f.lambda_max + f.lambda_min - g.trace()) < 1e-12 * scale);
        CHECK(std::abs(f.lambda_max * f.lambda_min - g.det()) < 1e-11 * scale * scale);
        CHECK(std::abs(f.v_max.norm() - 1.0) < 1e-13);
        CHECK(std::abs(f.v_max.dot(f.v_min)) < 1e-13);
        if (f.v_max.y() != 0.0) CHECK(f.v_max.y() >= 0.0);
    }
}

TEST_CASE("central_diff differentiates exactly on low-degree polynomials") {
    // First derivative: the two-point centred difference cancels the even
    // terms, so any quadratic is differentiated exactly at any step.
    auto quad = [](double x) { return 3.0 * x * x + 2.0 * x + 1.0; };
    const double d1 = qig::central_diff(quad, 1.3, 0.37, 1);
    CHECK(d1 == doctest::Approx(6.0 * 1.3 + 2.0).epsilon(1e-12));

    // Second derivative: the three-point stencil is exact on cubics.
    auto cubic = [](double x) { return x * x * x - 4.0 * x; };
    const double d2 = qig::central_diff(cubic, 0.8, 0.5, 2);
    CHECK(d2 == doctest::Approx(6.0 * 0.8).epsilon(1e-12));
}

TEST_CASE("central_diff converges at the expected rate on smooth functions") {
    auto f = [](double x) { return std::sin(x); };
    const double e1 = std::abs(qig::central_diff(f, 0.7, 1e-4, 1) - std::cos(0.7));
    const double e2 = std::abs(qig::central_diff(f, 0.7, 1e-3, 2) + std::sin(0.7));
    CHECK(e1 < 1e-8);
    CHECK(e2 < 1e-5);
}

TEST_CASE("central_diff rejects unsupported orders and steps") {
    auto f = [](double x) { return x; };
    CHECK_THROWS_AS(qig::central_diff(f, 0.0, 0.1, 3), std::invalid_argument);
    CHECK_THROWS_AS(qig::central_diff(f, 0.0, 0.0, 1), std::invalid_argument);
}
