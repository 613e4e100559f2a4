#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qig/numerics.hpp"
#include "qig/quasifree.hpp"

namespace qig::ising {

// Closed-form asymptotic regime for one metric entry, with an explicit
// machine-checkable validity window.
struct RegimePrediction {
    std::string name;
    std::string component;
    std::function<double(double, double)> formula;   // (h, T) -> predicted value
    std::function<bool(double, double)> validity;    // (h, T) -> in window?
};

// Transverse-field chain dispersion: epsilon = cos k - h, delta = sin k,
// Lambda = sqrt(eps^2 + delta^2), with analytic h-derivatives
// dLambda = -eps/Lambda, dtheta = delta/Lambda^2, plus the energy-variable
// transform over omega in [|1-h|, 1+h] used near the gapless point.
quasifree::DispersionModel ising_dispersion();

// Per-site metric at (h, T), thermodynamic limit. Negative h is mirrored
// onto |h| with the cross term negated (Z2 symmetry of the chain).
quasifree::MetricComponents metric_components_at(double h, double T,
                                                 const QuadratureSpec& spec = {});
SymMat2 metric_at(double h, double T, const QuadratureSpec& spec = {});

// T = 0 limit of the non-classical term,
//   (1/8 pi h^2) Int_{|1-h|}^{1+h} sqrt(((1+h)^2-w^2)(w^2-(1-h)^2)) / w^3 dw.
// Throws GaplessPoint at h = 1 where the integral diverges.
double zero_temperature_nc(double h, const QuadratureSpec& spec = {});

// Closed forms on the h = 0 line, where the dispersion is flat (Lambda = 1)
// and the tensor is diagonal:
//   g_hh = b^2/(16(cosh b + 1)) + (cosh b - 1)/(8 cosh b),
//   g_TT = b^4/(8(cosh b + 1)),  b = 1/T.
SymMat2 h_zero_metric(double T);

// The two temperatures on the h = 0 line where g_hh and g_TT exchange
// dominance, found by bisection on the closed forms.
struct Crossings {
    double t_low = 0.0;
    double t_high = 0.0;
};
Crossings h_zero_line_crossings();

// All closed-form regime expansions exposed by name for the verification
// command and the tests.
std::vector<RegimePrediction> asymptotic_predictions();

} // namespace qig::ising
