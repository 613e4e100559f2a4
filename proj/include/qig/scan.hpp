#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "qig/geometry.hpp"
#include "qig/numerics.hpp"
#include "qig/quasifree.hpp"

namespace qig::scan {

struct ScanConfig {
    double h_min = 0.0;
    double h_max = 1.0;
    int h_count = 2;
    double t_min = 0.1;
    double t_max = 1.0;
    int t_count = 2;
    double rel_tol = 1e-10;      // node-value quadrature tolerance
    std::string format = "csv";  // csv | json
    std::string out;             // empty means stdout
};

// Throws std::invalid_argument on counts < 2, non-positive T, inverted
// ranges, or an unknown format.
void validate(const ScanConfig& cfg);

std::vector<double> linspace(double a, double b, int count);

// Node evaluator exposing the classical/non-classical split of g_hh on top
// of the plain tensor.
using ComponentEval = std::function<quasifree::MetricComponents(double, double)>;

ComponentEval ising_components(const QuadratureSpec& spec);
geometry::MetricField ising_field(const ScanConfig& cfg, const QuadratureSpec& spec);

// Constant identity metric; test hook for the extraction pipeline, which
// must come back empty on it.
ComponentEval flat_components();
geometry::MetricField flat_field(const ScanConfig& cfg);

struct ScanResult {
    geometry::ScanGrid grid;
    // Classical/non-classical split of g_hh, aligned with grid.nodes.
    std::vector<double> g_hh_classical;
    std::vector<double> g_hh_nonclassical;
};

// Evaluates metric components, eigen-frames and interior-node curvature on
// the configured grid. Node values use cfg.rel_tol; the curvature stencil
// re-evaluates the metric through `stencil_field`, which should carry a much
// tighter quadrature target because the second differences divide by
// step^2 ~ 1e-8 and would otherwise surface quadrature noise in the
// curvature sign. The one-argument overload wires up the Ising field with
// exactly that pairing.
ScanResult run_scan(const ScanConfig& cfg);
ScanResult run_scan(const ScanConfig& cfg, const ComponentEval& node_eval,
                    const geometry::MetricField& stencil_field);

// Fixed-schema writers. CSV columns, exactly:
//   h,T,g_hh,g_hT,g_TT,g_hh_classical,g_hh_nonclassical,
//   lambda_max,lambda_min,vmax_h,vmax_T,curvature
// Floats are written with 17 significant digits ('.' decimal point); the
// curvature field is left blank (null in JSON) where it was not computed.
// Rows are ordered T-major, h-minor. Failed nodes are skipped in the data;
// callers report them from the grid's failure records instead.
void write_csv(const ScanResult& result, std::ostream& os);
void write_json(const ScanResult& result, std::ostream& os);

}  // namespace qig::scan
