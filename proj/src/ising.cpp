#include "qig/ising.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qig/errors.hpp"

namespace qig::ising {

using std::numbers::pi;

namespace {

constexpr double catalan = 0.915965594177219015;

double band_radical(double omega, double h) {
    // sqrt(((1+h)^2 - w^2)(w^2 - (1-h)^2)), clamped against rounding at the
    // band edges where the product can dip a hair below zero.
    const double lo = (1.0 - h) * (1.0 - h);
    const double hi = (1.0 + h) * (1.0 + h);
    const double w2 = omega * omega;
    return std::sqrt(std::max((hi - w2) * (w2 - lo), 0.0));
}

} // namespace

quasifree::DispersionModel ising_dispersion() {
    quasifree::DispersionModel dm;
    dm.epsilon = [](double k, double h) { return std::cos(k) - h; };
    dm.delta = [](double k, double) { return std::sin(k); };
    dm.lambda = [](double k, double h) {
        const double e = std::cos(k) - h;
        const double d = std::sin(k);
        return std::sqrt(e * e + d * d);
    };
    dm.theta = [](double k, double h) { return std::atan2(std::sin(k), std::cos(k) - h); };
    dm.d_lambda = [](double k, double h) {
        const double e = std::cos(k) - h;
        const double d = std::sin(k);
        return -e / std::sqrt(e * e + d * d);
    };
    dm.d_theta = [](double k, double h) {
        const double e = std::cos(k) - h;
        const double d = std::sin(k);
        return d / (e * e + d * d);
    };

    // Energy-variable form, valid for h >= 0 (callers mirror negative h).
    // With c = cos k = (1+h^2-w^2)/(2h): eps = c - h, sin k = R/(2h),
    // dk/dw = 2w/R; expressing the derivatives directly in w avoids the
    // catastrophic acos cancellation near the band bottom at h ~ 1.
    quasifree::EnergyTransform tr;
    tr.omega_min = [](double h) { return std::abs(1.0 - std::abs(h)); };
    tr.omega_max = [](double h) { return 1.0 + std::abs(h); };
    tr.at = [](double w, double h) {
        const double r = band_radical(w, h);
        quasifree::EnergyPoint p;
        p.epsilon = (1.0 - h * h - w * w) / (2.0 * h);
        p.d_lambda = -p.epsilon / w;
        p.d_theta = r / (2.0 * h * w * w);
        p.dk_domega = 2.0 * w / r;
        return p;
    };
    dm.transform = tr;
    return dm;
}

quasifree::MetricComponents metric_components_at(double h, double T,
                                                 const QuadratureSpec& spec) {
    const double ha = std::abs(h);
    quasifree::MetricComponents mc =
        quasifree::thermodynamic_metric_components(ising_dispersion(), ha, T, spec);
    if (h < 0.0)
        mc.g_ht = -mc.g_ht;
    return mc;
}

SymMat2 metric_at(double h, double T, const QuadratureSpec& spec) {
    return metric_components_at(h, T, spec).tensor();
}

double zero_temperature_nc(double h, const QuadratureSpec& spec) {
    if (!(h > 0.0))
        throw std::invalid_argument("zero_temperature_nc: requires h > 0");
    if (std::abs(h - 1.0) < 1e-12)
        throw GaplessPoint("zero_temperature_nc: integral diverges at h = 1");
    const double lo = std::abs(1.0 - h);
    const double hi = 1.0 + h;
    auto f = [h](double w) { return band_radical(w, h) / (w * w * w); };
    return integrate(f, lo, hi, spec) / (8.0 * pi * h * h);
}

SymMat2 h_zero_metric(double T) {
    if (!(T > 0.0))
        throw std::invalid_argument("h_zero_metric: T must be positive");
    const double b = 1.0 / T;
    const double icp1 = quasifree::inv_cosh_plus_one(b);
    SymMat2 g;
    g.a11 = b * b / 16.0 * icp1 + 0.125 * quasifree::one_minus_sech(b);
    g.a12 = 0.0;
    g.a22 = b * b * b * b / 8.0 * icp1;
    return g;
}

Crossings h_zero_line_crossings() {
    auto gap = [](double T) {
        const SymMat2 g = h_zero_metric(T);
        return g.a11 - g.a22;
    };
    auto bisect = [&gap](double lo, double hi) {
        double flo = gap(lo);
        double fhi = gap(hi);
        if (flo == 0.0)
            return lo;
        if (fhi == 0.0)
            return hi;
        if ((flo > 0.0) == (fhi > 0.0))
            throw RootNotBracketed("h_zero_line_crossings: no sign change in bracket");
        while (hi - lo > 1e-10) {
            const double mid = 0.5 * (lo + hi);
            const double fm = gap(mid);
            if (fm == 0.0)
                return mid;
            if ((fm > 0.0) == (flo > 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    };
    Crossings out;
    out.t_high = bisect(0.5, 1.5);
    out.t_low = bisect(0.05, 0.5);
    return out;
}

std::vector<RegimePrediction> asymptotic_predictions() {
    auto gap_of = [](double h) { return std::abs(1.0 - std::abs(h)); };
    auto critical = [gap_of](double h, double T) { return T >= 10.0 * gap_of(h); };
    auto quasiclassical = [gap_of](double h, double T) { return T <= gap_of(h) / 10.0; };

    std::vector<RegimePrediction> out;

    out.push_back({"critical_classical_linear", "g_hh_c",
                   [](double h, double T) { return pi * T / (96.0 * h * h); },
                   critical});

    out.push_back({"quasiclassical_classical_saddle", "g_hh_c",
                   [gap_of](double h, double T) {
                       const double d = gap_of(h);
                       return std::sqrt(d / (32.0 * pi * h)) * std::pow(T, -1.5) *
                              std::exp(-d / T);
                   },
                   quasiclassical});

    out.push_back({"catalan_critical", "g_hh_nc",
                   [](double h, double T) {
                       return (catalan / (pi * pi) / T - 1.0 / 16.0) / (h * h);
                   },
                   critical});

    out.push_back({"zero_t_energy_integral", "g_hh_nc",
                   [](double h, double) { return zero_temperature_nc(h); },
                   quasiclassical});

    out.push_back({"gap_divergence_16delta", "g_hh_nc",
                   [gap_of](double h, double) { return 1.0 / (16.0 * gap_of(h)); },
                   quasiclassical});

    out.push_back({"large_gap_ellipse", "g_hh_nc",
                   [](double h, double) {
                       return 1.0 / (8.0 * std::pow(h, 2.5) * std::pow(h - 1.0, 1.5));
                   },
                   quasiclassical});

    // The printed mixed-term integral approaches a negative constant at the
    // critical point; pi/48 is its magnitude.
    out.push_back({"mixed_term_constant", "g_ht",
                   [](double, double) { return -pi / 48.0; },
                   critical});

    out.push_back({"gtt_cft", "g_tt",
                   [](double, double T) { return pi / (24.0 * T); },
                   critical});

    out.push_back({"quasiclassical_ght_saddle", "g_ht",
                   [gap_of](double h, double T) {
                       const double d = gap_of(h);
                       return -std::sqrt(d * d * d / (32.0 * pi * h)) *
                              std::pow(T, -2.5) * std::exp(-d / T);
                   },
                   quasiclassical});

    out.push_back({"quasiclassical_gtt_saddle", "g_tt",
                   [gap_of](double h, double T) {
                       const double d = gap_of(h);
                       return std::sqrt(std::pow(d, 5) / (32.0 * pi * h)) *
                              std::pow(T, -3.5) * std::exp(-d / T);
                   },
                   quasiclassical});

    out.push_back({"nc_scaling_exponent", "g_hh_nc",
                   [](double, double T) { return catalan / (pi * pi) / T; },
                   [](double h, double) { return h == 1.0; }});

    out.push_back({"large_field_line", "lambda_max",
                   [](double, double T) {
                       const double c = std::cosh(0.5);
                       return 2.0 / (16.0 * c * c * T * T);
                   },
                   [](double h, double T) { return h == T && h >= 10.0; }});

    return out;
}

} // namespace qig::ising
