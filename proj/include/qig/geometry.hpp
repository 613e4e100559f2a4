#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qig/numerics.hpp"

namespace qig::geometry {

// A smooth 2x2 metric over a rectangle in the (h, T) plane. `eval` must be
// total on the open rectangle; T_min is expected to be positive for thermal
// fields but the struct itself does not care.
struct MetricField {
    std::function<SymMat2(double, double)> eval;
    double h_min = 0.0;
    double h_max = 1.0;
    double t_min = 0.0;
    double t_max = 1.0;
};

struct GridNode {
    SymMat2 g{};
    EigenFrame2 frame{};
    // NaN until fill_curvature computes it; stays NaN at nodes too close to
    // the domain boundary for the difference stencil and at failed nodes.
    double curvature = std::numeric_limits<double>::quiet_NaN();
    bool ok = false;
    std::string failure;  // non-empty iff something went wrong at this node
};

struct ScanGrid {
    std::vector<double> h_axis;
    std::vector<double> t_axis;
    // Laid out T-major: nodes[it * h_axis.size() + ih].
    std::vector<GridNode> nodes;

    GridNode& at(std::size_t ih, std::size_t it) {
        return nodes[it * h_axis.size() + ih];
    }
    const GridNode& at(std::size_t ih, std::size_t it) const {
        return nodes[it * h_axis.size() + ih];
    }
    std::size_t failure_count() const;
};

struct Polyline {
    enum class Kind { zero_curvature, ridge };
    Kind kind = Kind::zero_curvature;
    std::vector<Eigen::Vector2d> points;  // (h, T), consecutive points distinct
};

struct RidgeMatch {
    std::size_t ridge_index = 0;
    std::size_t vertex_count = 0;
    double mean_distance = 0.0;  // mean over ridge vertices of the distance
                                 // to the nearest zero-curvature segment
};

struct CrossoverReport {
    std::vector<RidgeMatch> matches;
};

// Evaluates the metric and its eigen-frame on the tensor grid. Axes must be
// strictly increasing and contained in the field's rectangle. Failures are
// recorded per node; the function itself does not throw on evaluation errors.
ScanGrid eigen_field(const MetricField& mf,
                     std::vector<double> h_axis,
                     std::vector<double> t_axis);

// Gaussian curvature of the metric field at a point via the Brioschi formula,
// with all derivatives of E, F, G taken by central differences of size `step`.
// The point must be at least 2*step away from the domain boundary. Throws
// DegenerateMetric when det g <= 1e-12 * (trace g)^2 at the point.
double gaussian_curvature(const MetricField& mf, double h, double t, double step);

// Difference step used for curvature on a given grid:
// max(1e-4, 1e-3 * min(h spacing, T spacing)).
double curvature_step(const std::vector<double>& h_axis,
                      const std::vector<double>& t_axis);

// Computes curvature at every node far enough from the domain boundary,
// recording per-node failures. The field passed here may differ from the one
// used for the node values, e.g. with tighter quadrature settings, since the
// stencil differences amplify evaluation noise by 1/step^2.
void fill_curvature(ScanGrid& sg, const MetricField& mf, double step);

// Marching-squares extraction of the K = 0 level set with linear
// interpolation along cell edges, chained into polylines. Cells touching a
// node without curvature are skipped. Saddle cells are disambiguated by the
// cell-center sample of the bilinear interpolant.
std::vector<Polyline> zero_curvature_contours(const ScanGrid& sg);

// Grid-local ridges of lambda_max: a node qualifies when lambda_max is a
// strict local maximum along the grid direction most aligned with v_min.
// Qualifying nodes are chained through 8-neighborhood adjacency.
std::vector<Polyline> ridge_lines(const ScanGrid& sg);

// For each ridge polyline, the mean distance from its vertices to the nearest
// zero-curvature polyline. Throws NoLines when either set is empty.
CrossoverReport crossover_report(const std::vector<Polyline>& ridges,
                                 const std::vector<Polyline>& contours);
CrossoverReport crossover_report(const ScanGrid& sg);

}  // namespace qig::geometry
