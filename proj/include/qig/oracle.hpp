#pragma once

#include <cstdint>
#include <iosfwd>

namespace qig::oracle {

// Randomized three-way comparison on small quasifree systems:
//   1. pair-sum closed forms against the generic spectral metric evaluated
//      on the explicitly built 4^n-dimensional system;
//   2. closed forms against a finite-difference estimate obtained from the
//      Uhlmann fidelity of nearby Gibbs states.
// Draw scheme, in order, from a seeded std::mt19937_64 with
// u = (next() >> 11) * 2^-53: per mode Lambda in [0.1, 3], dLambda in
// [-1, 1], dtheta in [-1, 1]; then beta in [0.1, 10].
struct OracleConfig {
    int modes = 3;
    int trials = 100;
    std::uint64_t seed = 7;
    bool zero_theta = false;  // force dtheta = 0 (purely classical families)
};

struct OracleResult {
    double max_rel_dense = 0.0;  // closed forms vs dense spectral route
    double max_rel_fd = 0.0;     // closed forms vs fidelity differences
    int skipped_directions = 0;  // directions with immeasurably small 1 - F
    int trials = 0;
    bool any_nan = false;

    bool pass(double dense_tol = 1e-6, double fd_tol = 1e-5) const {
        return !any_nan && max_rel_dense <= dense_tol && max_rel_fd <= fd_tol;
    }
};

OracleResult run_oracle(const OracleConfig& cfg);
void write_report(std::ostream& os, const OracleConfig& cfg, const OracleResult& result);

}  // namespace qig::oracle
