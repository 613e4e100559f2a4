#pragma once

#include <functional>

#include <Eigen/Dense>

namespace qig {

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_subdivisions = 2000;
};

// Symmetric 2x2 tensor over (h, T); only the three independent entries are stored.
struct SymMat2 {
    double a11 = 0.0;
    double a12 = 0.0;
    double a22 = 0.0;

    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a12; }

    Eigen::Matrix2d matrix() const {
        Eigen::Matrix2d m;
        m << a11, a12, a12, a22;
        return m;
    }
};

// Ordered eigensystem of a SymMat2 with a deterministic sign convention:
// the T (second) component of each eigenvector is >= 0, and if it vanishes
// (within 1e-12) the h component is >= 0.
struct EigenFrame2 {
    double lambda_max = 0.0;
    double lambda_min = 0.0;
    Eigen::Vector2d v_max = Eigen::Vector2d::UnitX();
    Eigen::Vector2d v_min = Eigen::Vector2d::UnitY();
};

// Adaptive Gauss-Kronrod 7/15 quadrature of f over [a, b].
// Stops when the summed error estimate is <= max(abs_tol, rel_tol*|I|);
// throws NonConvergence when max_subdivisions panels are not enough.
// Endpoints are never evaluated, so integrable endpoint singularities
// (e.g. 1/sqrt(x)) converge without special handling.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec = {});

// Closed-form symmetric 2x2 eigendecomposition (stable branch selection,
// second eigenvalue recovered from the determinant).
EigenFrame2 eigen2(const SymMat2& m);

// Central finite differences. order 1: (f(x+s)-f(x-s))/(2s), exact on
// quadratics; order 2: (f(x+s)-2f(x)+f(x-s))/s^2, exact on cubics.
// Step selection is entirely the caller's business.
double central_diff(const std::function<double(double)>& f, double x,
                    double step, int order);

} // namespace qig
