#include "qig/numerics.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "qig/errors.hpp"

namespace qig {

namespace {

// 15-point Kronrod abscissae on [-1,1] (positive half; odd indices are the
// embedded 7-point Gauss nodes) and the matching weights, QUADPACK values.
constexpr double xgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double wgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double result;
    double err;
    double resabs;
    bool operator<(const Panel& o) const { return err < o.err; }
};

// One Gauss-Kronrod 7/15 evaluation over [a,b] with the QUADPACK error
// estimate (sharpened by the scaled deviation sum, floored at roundoff).
Panel gk15(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double hlen = 0.5 * (b - a);

    double fv[15];
    const double fc = f(center);
    fv[14] = fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = hlen * xgk[j];
        fv[j] = f(center - dx);
        fv[7 + j] = f(center + dx);
    }

    double resg = wg[3] * fc;
    double resk = wgk[7] * fc;
    double resabs = wgk[7] * std::abs(fc);
    for (int j = 0; j < 7; ++j) {
        const double sum = fv[j] + fv[7 + j];
        resk += wgk[j] * sum;
        resabs += wgk[j] * (std::abs(fv[j]) + std::abs(fv[7 + j]));
        if (j % 2 == 1)
            resg += wg[j / 2] * sum;
    }

    const double reskh = resk * 0.5;
    double resasc = wgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += wgk[j] * (std::abs(fv[j] - reskh) + std::abs(fv[7 + j] - reskh));

    resabs *= std::abs(hlen);
    resasc *= std::abs(hlen);

    double err = std::abs((resk - resg) * hlen);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    const double uflow = std::numeric_limits<double>::min();
    if (resabs > uflow / (50.0 * eps))
        err = std::max(50.0 * eps * resabs, err);

    return {a, b, resk * hlen, err, resabs};
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec) {
    if (!(a < b))
        throw std::invalid_argument("integrate: requires a < b");
    if (!(spec.rel_tol > 0.0) || spec.abs_tol < 0.0 || spec.max_subdivisions < 1)
        throw std::invalid_argument("integrate: bad QuadratureSpec");

    std::priority_queue<Panel> panels;
    Panel first = gk15(f, a, b);
    double total = first.result;
    double errsum = first.err;
    double abssum = first.resabs;
    panels.push(first);

    // Near-zero integrals of not-so-small integrands can never beat the
    // per-panel roundoff floor, so accept once the accumulated error sits at
    // the floor's scale (the QUADPACK convention).
    const double eps = std::numeric_limits<double>::epsilon();
    auto tolerance = [&] {
        return std::max({spec.abs_tol, spec.rel_tol * std::abs(total), 100.0 * eps * abssum});
    };

    int used = 1;
    while (errsum > tolerance()) {
        if (!std::isfinite(total))
            throw NonConvergence("integrate: estimate is not finite");
        if (used >= spec.max_subdivisions)
            throw NonConvergence("integrate: subdivision limit reached");
        Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b)
            throw NonConvergence("integrate: panel width at rounding limit");
        Panel left = gk15(f, worst.a, mid);
        Panel right = gk15(f, mid, worst.b);
        total += left.result + right.result - worst.result;
        errsum += left.err + right.err - worst.err;
        abssum += left.resabs + right.resabs - worst.resabs;
        panels.push(left);
        panels.push(right);
        ++used;
    }
    if (!std::isfinite(total))
        throw NonConvergence("integrate: estimate is not finite");
    return total;
}

EigenFrame2 eigen2(const SymMat2& m) {
    const double tr = m.a11 + m.a22;
    const double det = m.det();
    const double q = std::hypot(m.a11 - m.a22, 2.0 * m.a12);

    // Largest-magnitude root from the non-cancelling branch, the other from
    // the determinant (Chernov's trick); then sort algebraically.
    double lmax, lmin;
    if (tr > 0.0) {
        lmax = 0.5 * (tr + q);
        lmin = (lmax != 0.0) ? det / lmax : 0.5 * (tr - q);
    } else if (tr < 0.0) {
        lmin = 0.5 * (tr - q);
        lmax = (lmin != 0.0) ? det / lmin : 0.5 * (tr + q);
    } else {
        lmax = 0.5 * q;
        lmin = -0.5 * q;
    }

    EigenFrame2 out;
    out.lambda_max = lmax;
    out.lambda_min = lmin;

    // Eigenvector for lambda_max from the better-conditioned residual column.
    Eigen::Vector2d c1(m.a12, lmax - m.a11);
    Eigen::Vector2d c2(lmax - m.a22, m.a12);
    Eigen::Vector2d v = (c1.norm() >= c2.norm()) ? c1 : c2;
    if (v.norm() == 0.0) {
        // Degenerate (scalar) matrix: canonical axes frame.
        v = Eigen::Vector2d::UnitX();
    }
    v.normalize();
    Eigen::Vector2d w(-v.y(), v.x());

    auto fix_sign = [](Eigen::Vector2d& u) {
        if (u.y() < -1e-12)
            u = -u;
        else if (std::abs(u.y()) <= 1e-12 && u.x() < 0.0)
            u = -u;
    };
    fix_sign(v);
    fix_sign(w);
    out.v_max = v;
    out.v_min = w;
    return out;
}

double central_diff(const std::function<double(double)>& f, double x,
                    double step, int order) {
    if (!(step > 0.0))
        throw std::invalid_argument("central_diff: step must be positive");
    if (order == 1)
        return (f(x + step) - f(x - step)) / (2.0 * step);
    if (order == 2)
        return (f(x + step) - 2.0 * f(x) + f(x - step)) / (step * step);
    throw std::invalid_argument("central_diff: order must be 1 or 2");
}

} // namespace qig
