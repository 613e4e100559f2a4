#include "qig/metric_core.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "qig/errors.hpp"

namespace qig {

void validate(const SpectralState& s) {
    const auto n = s.probs.size();
    if (s.d_probs.size() != n || s.overlap_d.rows() != n || s.overlap_d.cols() != n)
        throw DimensionMismatch("SpectralState: inconsistent sizes");
    for (Eigen::Index i = 0; i < n; ++i)
        if (s.probs[i] < -1e-12)
            throw NegativeProbability("SpectralState: negative eigenvalue");
    if (std::abs(s.probs.sum() - 1.0) > 1e-12)
        throw std::invalid_argument("SpectralState: probabilities must sum to 1");
    if (std::abs(s.d_probs.sum()) > 1e-12)
        throw std::invalid_argument("SpectralState: d_probs must sum to 0");
    if ((s.overlap_d + s.overlap_d.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("SpectralState: overlap_d must be anti-Hermitian");
}

double uhlmann_fidelity(const DenseState& rho, const DenseState& sigma) {
    if (rho.matrix.rows() != sigma.matrix.rows())
        throw DimensionMismatch("uhlmann_fidelity: dimension mismatch");

    auto sqrt_psd = [](const Eigen::MatrixXcd& m) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
        return Eigen::MatrixXcd(es.eigenvectors() *
                                es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                                es.eigenvectors().adjoint());
    };
    // Trace norm of sqrt(rho)*sqrt(sigma). Its singular values equal the
    // square roots of the eigenvalues of sqrt(rho)*sigma*sqrt(rho), but the
    // SVD reaches them directly: eigenvalues of the sandwiched product that
    // sit near the round-off floor would have their absolute errors blown up
    // by the infinite slope of sqrt at zero, which at large beta is the
    // dominant noise in 1 - F.
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sqrt_psd(rho.matrix) * sqrt_psd(sigma.matrix));
    return svd.singularValues().sum();
}

MetricSplit bures_parts(const SpectralState& s) {
    validate(s);
    const auto n = s.probs.size();
    MetricSplit out;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (s.probs[i] < kernel_eps)
            continue;
        out.classical += 0.25 * s.d_probs[i] * s.d_probs[i] / s.probs[i];
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j)
                continue;
            const double psum = s.probs[i] + s.probs[j];
            if (psum < kernel_eps)
                continue;
            const double pdiff = s.probs[i] - s.probs[j];
            out.nonclassical += 0.5 * std::norm(s.overlap_d(i, j)) * pdiff * pdiff / psum;
        }
    }
    return out;
}

double bures_ds2(const SpectralState& s) {
    return bures_parts(s).total();
}

double qcb_ds2(const SpectralState& s) {
    validate(s);
    const auto n = s.probs.size();
    double out = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (s.probs[i] < kernel_eps)
            continue;
        out += 0.125 * s.d_probs[i] * s.d_probs[i] / s.probs[i];
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j)
                continue;
            if (s.probs[i] + s.probs[j] < kernel_eps)
                continue;
            const double pdiff = s.probs[i] - s.probs[j];
            const double denom = std::sqrt(s.probs[i]) + std::sqrt(s.probs[j]);
            out += 0.5 * std::norm(s.overlap_d(i, j)) * pdiff * pdiff / (denom * denom);
        }
    }
    return out;
}

namespace {

Eigen::VectorXd gibbs_probs(const Eigen::VectorXd& energies, double beta) {
    // Shift by the minimum before exponentiating so large beta cannot overflow.
    const double e0 = energies.minCoeff();
    Eigen::VectorXd w = (-beta * (energies.array() - e0)).exp();
    return w / w.sum();
}

} // namespace

SpectralState thermal_spectral_state(const ThermalFamily& f, double lambda) {
    if (!(f.beta > 0.0) || !std::isfinite(f.beta))
        throw std::invalid_argument("thermal_spectral_state: beta must be finite and > 0");

    const Eigen::VectorXd energies = f.energies(lambda);
    const Eigen::VectorXd d_energies = f.d_energies(lambda);
    const Eigen::MatrixXcd couplings = f.d_couplings(lambda);
    const auto n = energies.size();
    if (d_energies.size() != n || couplings.rows() != n || couplings.cols() != n)
        throw DimensionMismatch("thermal_spectral_state: inconsistent sizes");

    const double scale = std::max(1.0, energies.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (std::abs(energies[i] - energies[j]) <= 1e-12 * scale &&
                std::abs(couplings(i, j)) > 0.0)
                throw DegenerateCoupling(
                    "thermal_spectral_state: coupling across a degenerate pair");

    SpectralState s;
    s.probs = gibbs_probs(energies, f.beta);
    const double mean_de = s.probs.dot(d_energies);
    s.d_probs = -f.beta * s.probs.array() * (d_energies.array() - mean_de);
    s.overlap_d = couplings;
    s.overlap_d.diagonal().setZero();
    return s;
}

SymMat2 thermal_metric_2x2(const ThermalFamily& f, double lambda) {
    const SpectralState s = thermal_spectral_state(f, lambda);
    const Eigen::VectorXd energies = f.energies(lambda);
    const Eigen::VectorXd d_energies = f.d_energies(lambda);
    const double beta = f.beta;

    // Classical block in (lambda, beta) coordinates from the Gibbs Fisher
    // form dp = -p (E - <E>) dbeta - beta p (dE - <dE>) dlambda:
    //   g_bb = var(E)/4, g_lb = beta cov(E, dE)/4, g_ll = beta^2 var(dE)/4.
    const double mean_e = s.probs.dot(energies);
    const double mean_de = s.probs.dot(d_energies);
    double var_e = 0.0, var_de = 0.0, cov = 0.0;
    for (Eigen::Index i = 0; i < energies.size(); ++i) {
        const double ce = energies[i] - mean_e;
        const double cd = d_energies[i] - mean_de;
        var_e += s.probs[i] * ce * ce;
        var_de += s.probs[i] * cd * cd;
        cov += s.probs[i] * ce * cd;
    }
    const double g_bb = 0.25 * var_e;
    const double g_lb = 0.25 * beta * cov;
    const double g_ll_c = 0.25 * beta * beta * var_de;

    const double nonclassical = bures_parts(s).nonclassical;

    // (lambda, beta) -> (lambda, T) with dbeta = -dT/T^2.
    SymMat2 g;
    g.a11 = g_ll_c + nonclassical;
    g.a12 = -beta * beta * g_lb;
    g.a22 = beta * beta * beta * beta * g_bb;
    return g;
}

} // namespace qig
