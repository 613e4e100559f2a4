#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "qig/numerics.hpp"

namespace qig {

// Spectral data of a density matrix and an infinitesimal variation of it:
// eigenvalues p_n, their derivatives dp_n, and the eigenvector derivative
// overlaps <n|dm> (anti-Hermitian since d<n|m> = 0).
struct SpectralState {
    Eigen::VectorXd probs;
    Eigen::VectorXd d_probs;
    Eigen::MatrixXcd overlap_d;
};

// Plain density matrix for the brute-force fidelity path.
struct DenseState {
    Eigen::MatrixXcd matrix;
};

// A one-parameter family of Gibbs states described spectrally: energies and
// their parameter derivatives, plus the derivative couplings
// <n|dH|m>/(E_n - E_m) for non-degenerate pairs.
struct ThermalFamily {
    std::function<Eigen::VectorXd(double)> energies;
    std::function<Eigen::VectorXd(double)> d_energies;
    std::function<Eigen::MatrixXcd(double)> d_couplings;
    double beta = 1.0;
};

// Split value of the distinguishability quadratic form.
struct MetricSplit {
    double classical = 0.0;
    double nonclassical = 0.0;
    double total() const { return classical + nonclassical; }
};

// Pairs with p_n + p_m below this are dropped from the spectral sums (the
// rank-deficient directions carry no distinguishable weight).
inline constexpr double kernel_eps = 1e-14;

void validate(const SpectralState& s);

// Uhlmann fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)) via Hermitian
// eigendecompositions with clamping of tiny negative eigenvalues.
double uhlmann_fidelity(const DenseState& rho, const DenseState& sigma);

// Infinitesimal Bures distance in split form:
//   ds^2 = 1/4 sum dp_n^2/p_n  +  1/2 sum_{n!=m} |<n|dm>|^2 (p_n-p_m)^2/(p_n+p_m).
MetricSplit bures_parts(const SpectralState& s);
double bures_ds2(const SpectralState& s);

// Quantum-Chernoff-bound metric: same sums with denominators
// (sqrt(p_n)+sqrt(p_m))^2; its diagonal part is half the Fisher-Rao term.
double qcb_ds2(const SpectralState& s);

// Gibbs weights and their variation for a ThermalFamily at a parameter point:
//   dp_n = -beta p_n (dE_n - <dE>),   <n|dm> = <n|dH|m>/(E_n - E_m).
SpectralState thermal_spectral_state(const ThermalFamily& f, double lambda);

// Full 2x2 tensor of the thermal family over (parameter, temperature),
// converted from (lambda, beta) to (lambda, T) with dbeta = -dT/T^2:
//   g_TT = beta^4 g_bb,  g_hT = -beta^2 g_hb,  g_hh unchanged.
SymMat2 thermal_metric_2x2(const ThermalFamily& f, double lambda);

} // namespace qig
