#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qig/metric_core.hpp"
#include "qig/numerics.hpp"

namespace qig::quasifree {

// One positive-momentum label nu > 0. An entry stands for the (nu, -nu)
// excitation pair: two fermions sharing Lambda and d_lambda, with the
// single pair-rotation derivative d_theta.
struct Mode {
    double lambda = 1.0;    // quasiparticle energy, > 0
    double d_lambda = 0.0;  // d Lambda / dh
    double d_theta = 0.0;   // d theta / dh (Bogoliubov angle derivative)
};

struct ModeSystem {
    std::vector<Mode> modes;
    double beta = 1.0;
};

// Classical (Fisher-Rao) block in (h, beta) coordinates. g_hb is the
// coefficient of the dbeta dh cross term (twice the tensor element).
struct ClassicalBlock {
    double g_bb = 0.0;
    double g_hb = 0.0;
    double g_hh_c = 0.0;
};

// Metric component bundle in (h, T) coordinates, split as the sum
// g_hh = g_hh_c + g_hh_nc.
struct MetricComponents {
    double g_hh_c = 0.0;
    double g_hh_nc = 0.0;
    double g_ht = 0.0;
    double g_tt = 0.0;

    SymMat2 tensor() const {
        return {g_hh_c + g_hh_nc, g_ht, g_tt};
    }
};

// Data needed to integrate in the energy variable omega instead of momentum:
// the integrands re-expressed through omega plus the Jacobian dk/domega.
struct EnergyPoint {
    double epsilon = 0.0;
    double d_lambda = 0.0;
    double d_theta = 0.0;
    double dk_domega = 0.0;
};

struct EnergyTransform {
    std::function<double(double)> omega_min;  // of h
    std::function<double(double)> omega_max;  // of h
    std::function<EnergyPoint(double, double)> at;  // (omega, h)
};

// Dispersion bundle over (k, h). Lambda^2 = epsilon^2 + delta^2 and
// theta = atan2(delta, epsilon), continuous in k on (0, pi).
struct DispersionModel {
    std::function<double(double, double)> epsilon;
    std::function<double(double, double)> delta;
    std::function<double(double, double)> lambda;
    std::function<double(double, double)> theta;
    std::function<double(double, double)> d_lambda;
    std::function<double(double, double)> d_theta;
    std::optional<EnergyTransform> transform;
};

// Thermal occupation fluctuation <n>(1-<n>) for a single fermion of energy
// lambda, equal to 1/(2(cosh(beta*lambda)+1)); evaluated in an
// overflow-safe form.
double occupation_fluctuation(double beta, double lambda);

// Stable 1 - sech(x) and 1/(cosh(x)+1); both saturate correctly for large x.
double one_minus_sech(double x);
double inv_cosh_plus_one(double x);

// Mode sums of the classical block. Each ModeSystem entry contributes both
// fermions of its (nu, -nu) pair, which doubles the naive per-mode sums:
//   g_bb   = 1/2 sum v Lambda^2
//   g_hb   = beta sum v Lambda dLambda          (dbeta dh coefficient)
//   g_hh_c = beta^2/2 sum v dLambda^2
// with v = <n>(1-<n>). The dense few-mode construction below is the
// authority for this normalization.
ClassicalBlock classical_block(const ModeSystem& ms);

// Non-classical dh^2 term: 1/4 sum over pairs of
// (cosh(beta Lambda)-1)/cosh(beta Lambda) * d_theta^2.
double nonclassical_hh(const ModeSystem& ms);

// Assembles the mode sums into the (h, T) tensor with the same conventions
// as metric-core's thermal_metric_2x2 (cross element = half the dbeta dh
// coefficient, then the dbeta = -dT/T^2 substitution).
SymMat2 mode_metric_2x2(const ModeSystem& ms);

// Explicit many-body spectrum for <= 6 pairs: one 4-level factor per pair
// with energies (0, Lambda, Lambda, 2Lambda), parameterized along h so that
// Lambda(x) = Lambda + x*dLambda, and the single derivative coupling
// <00|d|11> = d_theta/2 per pair. Throws TooManyModes above the cap.
ThermalFamily dense_from_modes(const ModeSystem& ms);

// Dense Gibbs density matrix of the same system at parameter offset x,
// with the pair rotation angle theta(x) = x*d_theta applied to the
// (|00>, |11>) sector of each factor. Used by the finite-difference
// fidelity oracle.
DenseState dense_gibbs(const ModeSystem& ms, double x);

// Per-site thermodynamic-limit metric components over k in [-pi, pi]:
//   g_hh_c  = (beta^2/16 pi) Int  eps^2/Lambda^2 / (cosh(beta Lambda)+1) dk
//   g_hh_nc = (1/8 pi)       Int  (1 - sech(beta Lambda)) delta^2/Lambda^4 dk
//   g_tt    = (beta^4/16 pi) Int  Lambda^2 / (cosh(beta Lambda)+1) dk
//   g_ht    = (beta^3/16 pi) Int  eps / (cosh(beta Lambda)+1) dk
// Integration runs in k by default; it switches to the energy variable when
// the model carries a transform and either the spectrum is gapless at this h
// (unconditionally) or the k-space quadrature fails to converge while
// beta*gap < 0.1 (the near-critical sharp-feature case).
MetricComponents thermodynamic_metric_components(const DispersionModel& dm,
                                                 double h, double T,
                                                 const QuadratureSpec& spec = {});

SymMat2 thermodynamic_metric(const DispersionModel& dm, double h, double T,
                             const QuadratureSpec& spec = {});

} // namespace qig::quasifree
