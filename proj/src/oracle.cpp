#include "qig/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

#include "qig/metric_core.hpp"
#include "qig/quasifree.hpp"

namespace qig::oracle {

namespace {

double uniform01(std::mt19937_64& rng) {
    // 53 high bits; identical value sequence on every conforming platform.
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

// Metric in (lambda, beta) coordinates from the stored (lambda, T) tensor,
// using dT = -dbeta/beta^2.
struct ParamMetric {
    double ll, lb, bb;
};

ParamMetric param_metric(const SymMat2& g, double beta) {
    const double b2 = beta * beta;
    return {g.a11, -g.a12 / b2, g.a22 / (b2 * b2)};
}

// Quadratic form of the fidelity susceptibility along the parameter
// direction u, from the symmetric two-point estimate at separation 2*delta
// with one Richardson step. Returns NaN when 1 - F is below measurement
// noise, which the caller records as a skipped direction.
double fd_metric(const quasifree::ModeSystem& ms, double ul, double ub, double delta) {
    auto state = [&](double s) {
        quasifree::ModeSystem shifted = ms;
        shifted.beta = ms.beta + s * ub;
        return quasifree::dense_gibbs(shifted, s * ul);
    };
    auto estimate = [&](double d) {
        const double f = uhlmann_fidelity(state(-d), state(d));
        return (1.0 - f) / (2.0 * d * d);
    };
    const double f_probe = uhlmann_fidelity(state(-delta), state(delta));
    if (1.0 - f_probe < 1e-10) return std::numeric_limits<double>::quiet_NaN();
    const double coarse = (1.0 - f_probe) / (2.0 * delta * delta);
    const double fine = estimate(0.5 * delta);
    return (4.0 * fine - coarse) / 3.0;
}

}  // namespace

OracleResult run_oracle(const OracleConfig& cfg) {
    if (cfg.modes < 1 || cfg.modes > 6)
        throw std::invalid_argument("oracle: modes must be between 1 and 6");
    if (cfg.trials < 1)
        throw std::invalid_argument("oracle: trials must be positive");

    std::mt19937_64 rng(cfg.seed);
    OracleResult result;

    for (int trial = 0; trial < cfg.trials; ++trial) {
        quasifree::ModeSystem ms;
        for (int j = 0; j < cfg.modes; ++j) {
            quasifree::Mode mode;
            mode.lambda = uniform(rng, 0.1, 3.0);
            mode.d_lambda = uniform(rng, -1.0, 1.0);
            mode.d_theta = uniform(rng, -1.0, 1.0);
            if (cfg.zero_theta) mode.d_theta = 0.0;
            ms.modes.push_back(mode);
        }
        ms.beta = uniform(rng, 0.1, 10.0);

        const SymMat2 closed = quasifree::mode_metric_2x2(ms);
        const SymMat2 dense = thermal_metric_2x2(quasifree::dense_from_modes(ms), 0.0);
        const double floor = 1e-12 * (std::abs(closed.a11) + std::abs(closed.a22)) + 1e-300;
        auto rel = [&](double a, double b) {
            return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
        };
        result.max_rel_dense = std::max({result.max_rel_dense,
                                         rel(closed.a11, dense.a11),
                                         rel(closed.a12, dense.a12),
                                         rel(closed.a22, dense.a22)});

        const ParamMetric m = param_metric(closed, ms.beta);
        const double dirs[3][2] = {{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
        const double scale = m.ll + m.bb + 1e-30;
        for (const auto& dir : dirs) {
            const double expected = m.ll * dir[0] * dir[0] +
                                    2.0 * m.lb * dir[0] * dir[1] +
                                    m.bb * dir[1] * dir[1];
            // Aim for 1 - F around 4e-6: far above the eigensolver noise in
            // the fidelity, far below the quartic truncation of the stencil.
            double delta = std::sqrt(2e-6 / std::max(expected, 1e-8));
            delta = std::clamp(delta, 1e-6, 0.04);
            const double fd = fd_metric(ms, dir[0], dir[1], delta);
            if (std::isnan(fd)) {
                ++result.skipped_directions;
                continue;
            }
            const double dev = std::abs(fd - expected) / std::max(std::abs(expected), 1e-9 * scale);
            result.max_rel_fd = std::max(result.max_rel_fd, dev);
        }

        if (std::isnan(closed.a11) || std::isnan(closed.a12) || std::isnan(closed.a22) ||
            std::isnan(dense.a11) || std::isnan(dense.a12) || std::isnan(dense.a22))
            result.any_nan = true;
        ++result.trials;
    }
    return result;
}

void write_report(std::ostream& os, const OracleConfig& cfg, const OracleResult& result) {
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "oracle: modes=%d trials=%d seed=%llu\n", cfg.modes, result.trials,
                  static_cast<unsigned long long>(cfg.seed));
    os << buf;
    std::snprintf(buf, sizeof(buf),
                  "  max relative deviation, closed vs dense spectral: %.3e (tol 1e-6)\n",
                  result.max_rel_dense);
    os << buf;
    std::snprintf(buf, sizeof(buf),
                  "  max relative deviation, closed vs fidelity differences: %.3e (tol 1e-5)\n",
                  result.max_rel_fd);
    os << buf;
    std::snprintf(buf, sizeof(buf), "  skipped immeasurable directions: %d\n",
                  result.skipped_directions);
    os << buf;
    os << (result.pass() ? "  PASS\n" : "  FAIL\n");
}

}  // namespace qig::oracle
