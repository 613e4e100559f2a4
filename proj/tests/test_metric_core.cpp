#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

#include "qig/errors.hpp"
#include "qig/metric_core.hpp"
#include "qig/numerics.hpp"

using namespace qig;
using Eigen::MatrixXcd;
using Eigen::VectorXd;
using std::complex;

namespace {

SpectralState classical_two_level(double p0, double eps) {
    SpectralState s;
    s.probs = VectorXd(2);
    s.probs << p0, 1.0 - p0;
    s.d_probs = VectorXd(2);
    s.d_probs << eps, -eps;
    s.overlap_d = MatrixXcd::Zero(2, 2);
    return s;
}

// Seeded random spectral state of the given dimension: positive weights
// normalized to 1, derivative summing to 0, anti-Hermitian overlap matrix
// with zero diagonal.
SpectralState random_state(std::mt19937_64& rng, int dim) {
    auto u = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    SpectralState s;
    s.probs = VectorXd(dim);
    for (int i = 0; i < dim; ++i) s.probs[i] = 0.05 + u();
    s.probs /= s.probs.sum();
    s.d_probs = VectorXd(dim);
    for (int i = 0; i < dim; ++i) s.d_probs[i] = -1.0 + 2.0 * u();
    s.d_probs.array() -= s.d_probs.mean();
    s.overlap_d = MatrixXcd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = i + 1; j < dim; ++j) {
            const complex<double> c(-1.0 + 2.0 * u(), -1.0 + 2.0 * u());
            s.overlap_d(i, j) = c;
            s.overlap_d(j, i) = -std::conj(c);
        }
    }
    return s;
}

}  // namespace

TEST_CASE("validate accepts well-formed states and rejects malformed ones") {
    auto good = classical_two_level(0.7, 0.2);
    CHECK_NOTHROW(validate(good));

    auto negative = good;
    negative.probs[0] = -0.1;
    negative.probs[1] = 1.1;
    CHECK_THROWS_AS(validate(negative), NegativeProbability);

    auto unnormalized = good;
    unnormalized.probs[0] = 0.9;
    CHECK_THROWS_AS(validate(unnormalized), std::invalid_argument);

    auto drifting = good;
    drifting.d_probs[0] = 0.3;
    CHECK_THROWS_AS(validate(drifting), std::invalid_argument);

    auto skewed = good;
    skewed.overlap_d(0, 1) = complex<double>(0.5, 0.0);
    skewed.overlap_d(1, 0) = complex<double>(0.5, 0.0);  // not anti-Hermitian
    CHECK_THROWS_AS(validate(skewed), std::invalid_argument);

    auto mismatched = good;
    mismatched.d_probs = VectorXd::Zero(3);
    CHECK_THROWS_AS(validate(mismatched), DimensionMismatch);
}

TEST_CASE("uhlmann_fidelity reproduces the commuting-case closed form") {
    DenseState rho{MatrixXcd::Zero(2, 2)};
    rho.matrix(0, 0) = 0.75;
    rho.matrix(1, 1) = 0.25;
    DenseState sigma{MatrixXcd::Zero(2, 2)};
    sigma.matrix(0, 0) = 0.5;
    sigma.matrix(1, 1) = 0.5;
    // Commuting pair: F = sum_n sqrt(p_n q_n).
    const double expected = std::sqrt(0.375) + std::sqrt(0.125);
    CHECK(uhlmann_fidelity(rho, sigma) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("uhlmann_fidelity on pure states is the overlap") {
    DenseState zero{MatrixXcd::Zero(2, 2)};
    zero.matrix(0, 0) = 1.0;
    DenseState plus{MatrixXcd::Constant(2, 2, complex<double>(0.5, 0.0))};
    CHECK(uhlmann_fidelity(zero, plus) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("uhlmann_fidelity is symmetric, bounded, and 1 on identical states") {
    std::mt19937_64 rng(9);
    auto u = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = 2 + static_cast<int>(rng() % 4);
        MatrixXcd a = MatrixXcd::NullaryExpr(
            dim, dim, [&](Eigen::Index, Eigen::Index) {
                return complex<double>(u() - 0.5, u() - 0.5);
            });
        MatrixXcd b = MatrixXcd::NullaryExpr(
            dim, dim, [&](Eigen::Index, Eigen::Index) {
                return complex<double>(u() - 0.5, u() - 0.5);
            });
        DenseState rho{a * a.adjoint()};
        rho.matrix /= rho.matrix.trace().real();
        DenseState sigma{b * b.adjoint()};
        sigma.matrix /= sigma.matrix.trace().real();

        const double f = uhlmann_fidelity(rho, sigma);
        CHECK(f >= 0.0);
        CHECK(f <= 1.0 + 1e-12);
        CHECK(f == doctest::Approx(uhlmann_fidelity(sigma, rho)).epsilon(1e-10));
        CHECK(uhlmann_fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("bures_parts on a classical bit is the Fisher term alone") {
    const double eps = 1.0;
    const auto parts = bures_parts(classical_two_level(0.7, eps));
    const double fisher = 0.25 * (eps * eps / 0.7 + eps * eps / 0.3);
    CHECK(parts.classical == doctest::Approx(fisher).epsilon(1e-14));
    CHECK(parts.nonclassical == 0.0);
    CHECK(bures_ds2(classical_two_level(0.7, eps)) == doctest::Approx(fisher).epsilon(1e-14));
}

TEST_CASE("bures_parts on a rotating pure qubit gives the rotation term") {
    SpectralState s;
    s.probs = VectorXd(2);
    s.probs << 1.0, 0.0;
    s.d_probs = VectorXd::Zero(2);
    s.overlap_d = MatrixXcd::Zero(2, 2);
    s.overlap_d(0, 1) = complex<double>(0.5, 0.0);
    s.overlap_d(1, 0) = complex<double>(-0.5, 0.0);
    const auto parts = bures_parts(s);
    CHECK(parts.classical == 0.0);
    CHECK(parts.nonclassical == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("qcb reduces to half the Fisher term when nothing rotates") {
    const auto s = classical_two_level(0.6, 0.3);
    CHECK(qcb_ds2(s) == doctest::Approx(0.5 * bures_ds2(s)).epsilon(1e-14));
}

TEST_CASE("qcb is sandwiched between half and full distinguishability") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const int dim = 2 + static_cast<int>(rng() % 7);
        const auto s = random_state(rng, dim);
        const double bures = bures_ds2(s);
        const double chernoff = qcb_ds2(s);
        const double slack = 1e-12 * std::max(1.0, bures);
        CHECK(chernoff <= bures + slack);
        CHECK(chernoff >= 0.5 * bures - slack);
    }
}

TEST_CASE("thermal_spectral_state matches a finite-difference Gibbs derivative") {
    ThermalFamily f;
    f.beta = 1.7;
    f.energies = [](double x) {
        VectorXd e(3);
        e << 0.0, 1.0 + 0.5 * x, 2.2 - 0.3 * x;
        return e;
    };
    f.d_energies = [](double) {
        VectorXd d(3);
        d << 0.0, 0.5, -0.3;
        return d;
    };
    f.d_couplings = [](double) { return MatrixXcd::Zero(3, 3); };

    const auto s = thermal_spectral_state(f, 0.4);
    CHECK_NOTHROW(validate(s));

    auto gibbs = [&](double x) {
        Eigen::ArrayXd w = (-f.beta * (f.energies(x).array() - f.energies(x).minCoeff())).exp();
        return (w / w.sum()).matrix().eval();
    };
    for (int n = 0; n < 3; ++n) {
        const double fd = (gibbs(0.4 + 1e-6)[n] - gibbs(0.4 - 1e-6)[n]) / 2e-6;
        CHECK(s.d_probs[n] == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("thermal_spectral_state flags degenerate levels only when coupled") {
    ThermalFamily f;
    f.beta = 1.0;
    f.energies = [](double) {
        VectorXd e(2);
        e << 1.0, 1.0;
        return e;
    };
    f.d_energies = [](double) { return VectorXd::Zero(2); };
    f.d_couplings = [](double) { return MatrixXcd::Zero(2, 2); };
    CHECK_NOTHROW(thermal_spectral_state(f, 0.0));

    f.d_couplings = [](double) {
        MatrixXcd c = MatrixXcd::Zero(2, 2);
        c(0, 1) = complex<double>(0.25, 0.0);
        c(1, 0) = complex<double>(-0.25, 0.0);
        return c;
    };
    CHECK_THROWS_AS(thermal_spectral_state(f, 0.0), DegenerateCoupling);
}

TEST_CASE("thermal_metric_2x2 matches directly accumulated moments") {
    ThermalFamily f;
    f.beta = 0.8;
    f.energies = [](double x) {
        VectorXd e(3);
        e << 0.0, 1.3 + 0.7 * x, 2.1 + 0.2 * x;
        return e;
    };
    f.d_energies = [](double) {
        VectorXd d(3);
        d << 0.0, 0.7, 0.2;
        return d;
    };
    f.d_couplings = [](double) { return MatrixXcd::Zero(3, 3); };

    const SymMat2 g = thermal_metric_2x2(f, 0.0);

    // Independent route: moments of E and dE under the Gibbs weights.
    const VectorXd e = f.energies(0.0);
    const VectorXd de = f.d_energies(0.0);
    Eigen::ArrayXd w = (-f.beta * (e.array() - e.minCoeff())).exp();
    w /= w.sum();
    const double me = (w * e.array()).sum();
    const double mde = (w * de.array()).sum();
    const double var_e = (w * (e.array() - me).square()).sum();
    const double var_de = (w * (de.array() - mde).square()).sum();
    const double cov = (w * (e.array() - me) * (de.array() - mde)).sum();

    const double b = f.beta;
    CHECK(g.a11 == doctest::Approx(b * b * var_de / 4.0).epsilon(1e-12));
    CHECK(g.a22 == doctest::Approx(b * b * b * b * var_e / 4.0).epsilon(1e-12));
    CHECK(g.a12 == doctest::Approx(-b * b * (b * cov / 4.0)).epsilon(1e-12));
}
