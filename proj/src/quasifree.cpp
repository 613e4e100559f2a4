#include "qig/quasifree.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "qig/errors.hpp"

namespace qig::quasifree {

double one_minus_sech(double x) {
    const double y = std::abs(x);
    if (y > 350.0)
        return 1.0;
    const double s = std::sinh(0.5 * y);
    return 2.0 * s * s / std::cosh(y);
}

double inv_cosh_plus_one(double x) {
    // 1/(cosh x + 1) = sech^2(x/2)/2, written to underflow gracefully.
    const double y = 0.5 * std::abs(x);
    const double e = std::exp(-y);
    const double sech = 2.0 * e / (1.0 + e * e);
    return 0.5 * sech * sech;
}

double occupation_fluctuation(double beta, double lambda) {
    return 0.5 * inv_cosh_plus_one(beta * lambda);
}

ClassicalBlock classical_block(const ModeSystem& ms) {
    const double beta = ms.beta;
    ClassicalBlock out;
    for (const Mode& m : ms.modes) {
        if (!(m.lambda > 0.0))
            throw std::invalid_argument("classical_block: mode energies must be positive");
        const double v = occupation_fluctuation(beta, m.lambda);
        // Both fermions of the (nu, -nu) pair contribute, hence 2 * (1/4).
        out.g_bb += 0.5 * v * m.lambda * m.lambda;
        out.g_hb += beta * v * m.lambda * m.d_lambda;
        out.g_hh_c += 0.5 * beta * beta * v * m.d_lambda * m.d_lambda;
    }
    return out;
}

double nonclassical_hh(const ModeSystem& ms) {
    double out = 0.0;
    for (const Mode& m : ms.modes) {
        if (!(m.lambda > 0.0))
            throw std::invalid_argument("nonclassical_hh: mode energies must be positive");
        out += 0.25 * one_minus_sech(ms.beta * m.lambda) * m.d_theta * m.d_theta;
    }
    return out;
}

SymMat2 mode_metric_2x2(const ModeSystem& ms) {
    const ClassicalBlock cb = classical_block(ms);
    const double beta = ms.beta;
    SymMat2 g;
    g.a11 = cb.g_hh_c + nonclassical_hh(ms);
    g.a12 = -beta * beta * (0.5 * cb.g_hb);
    g.a22 = beta * beta * beta * beta * cb.g_bb;
    return g;
}

namespace {

constexpr int max_dense_modes = 6;

// Factor level energies (0, L, L, 2L): occupation count per level.
constexpr double level_count[4] = {0.0, 1.0, 1.0, 2.0};

} // namespace

ThermalFamily dense_from_modes(const ModeSystem& ms) {
    const int n_modes = static_cast<int>(ms.modes.size());
    if (n_modes > max_dense_modes)
        throw TooManyModes("dense_from_modes: more pairs than the dense cap");
    const Eigen::Index dim = Eigen::Index(1) << (2 * n_modes);  // 4^n

    const std::vector<Mode> modes = ms.modes;

    auto raw_energies = [modes, dim, n_modes](double x) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            Eigen::Index rest = i;
            for (int p = 0; p < n_modes; ++p) {
                const int level = rest & 3;
                rest >>= 2;
                e[i] += level_count[level] * (modes[p].lambda + x * modes[p].d_lambda);
            }
        }
        return e;
    };

    // Permutation fixed at the base point keeps level labels consistent for
    // every nearby x the finite-difference oracle probes.
    std::vector<Eigen::Index> perm(dim);
    {
        const Eigen::VectorXd e0 = raw_energies(0.0);
        std::iota(perm.begin(), perm.end(), Eigen::Index(0));
        std::stable_sort(perm.begin(), perm.end(),
                         [&e0](Eigen::Index a, Eigen::Index b) { return e0[a] < e0[b]; });
    }

    ThermalFamily fam;
    fam.beta = ms.beta;
    fam.energies = [raw_energies, perm, dim](double x) {
        const Eigen::VectorXd e = raw_energies(x);
        Eigen::VectorXd out(dim);
        for (Eigen::Index i = 0; i < dim; ++i)
            out[i] = e[perm[i]];
        return out;
    };
    fam.d_energies = [modes, perm, dim, n_modes](double) {
        Eigen::VectorXd d = Eigen::VectorXd::Zero(dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            Eigen::Index rest = perm[i];
            for (int p = 0; p < n_modes; ++p) {
                const int level = rest & 3;
                rest >>= 2;
                d[i] += level_count[level] * modes[p].d_lambda;
            }
        }
        return d;
    };
    fam.d_couplings = [modes, perm, dim, n_modes](double) {
        Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(dim, dim);
        // <..00..| d |..11..> = d_theta/2 on each pair sector, everything
        // else unchanged; anti-Hermitian completion below.
        for (Eigen::Index i = 0; i < dim; ++i) {
            for (int p = 0; p < n_modes; ++p) {
                const int level = (i >> (2 * p)) & 3;
                if (level != 0)
                    continue;
                const Eigen::Index j = i + (Eigen::Index(3) << (2 * p));
                c(i, j) += 0.5 * modes[p].d_theta;
                c(j, i) -= 0.5 * modes[p].d_theta;
            }
        }
        Eigen::MatrixXcd out(dim, dim);
        for (Eigen::Index r = 0; r < dim; ++r)
            for (Eigen::Index s = 0; s < dim; ++s)
                out(r, s) = c(perm[r], perm[s]);
        return out;
    };
    return fam;
}

DenseState dense_gibbs(const ModeSystem& ms, double x) {
    const int n_modes = static_cast<int>(ms.modes.size());
    if (n_modes > max_dense_modes)
        throw TooManyModes("dense_gibbs: more pairs than the dense cap");

    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(1, 1);
    for (int p = 0; p < n_modes; ++p) {
        const Mode& m = ms.modes[p];
        const double lam = m.lambda + x * m.d_lambda;
        const double half_theta = 0.5 * x * m.d_theta;
        const double c = std::cos(half_theta);
        const double s = std::sin(half_theta);

        // Product basis |00>, |01>, |10>, |11>; the rotation mixes only the
        // outer (|00>, |11>) sector.
        Eigen::Vector4d evals(0.0, lam, lam, 2.0 * lam);
        Eigen::Matrix4d vecs = Eigen::Matrix4d::Identity();
        vecs(0, 0) = c;  vecs(3, 0) = -s;   // ground pair state
        vecs(0, 3) = s;  vecs(3, 3) = c;    // doubly excited pair state

        Eigen::Vector4d w = (-ms.beta * evals.array()).exp();
        w /= w.sum();
        Eigen::Matrix4d factor = vecs * w.asDiagonal() * vecs.transpose();

        // rho := factor (x) rho, so mode p is the fastest-varying index.
        Eigen::MatrixXcd next(factor.rows() * rho.rows(), factor.cols() * rho.cols());
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                next.block(a * rho.rows(), b * rho.cols(), rho.rows(), rho.cols()) =
                    factor(a, b) * rho;
        rho = std::move(next);
    }
    return DenseState{std::move(rho)};
}

namespace {

struct Prefactors {
    double c, nc, tt, ht;
};

Prefactors prefactors(double beta) {
    using std::numbers::pi;
    return {beta * beta / (16.0 * pi), 1.0 / (8.0 * pi),
            beta * beta * beta * beta / (16.0 * pi), beta * beta * beta / (16.0 * pi)};
}

MetricComponents k_route(const DispersionModel& dm, double h, double beta,
                         const QuadratureSpec& spec) {
    using std::numbers::pi;
    auto thermal = [&](double k) { return inv_cosh_plus_one(beta * dm.lambda(k, h)); };

    auto f_c = [&](double k) {
        const double lam = dm.lambda(k, h);
        const double e = dm.epsilon(k, h);
        return thermal(k) * e * e / (lam * lam);
    };
    auto f_nc = [&](double k) {
        const double lam = dm.lambda(k, h);
        const double d = dm.delta(k, h);
        const double l2 = lam * lam;
        return one_minus_sech(beta * lam) * d * d / (l2 * l2);
    };
    auto f_tt = [&](double k) {
        const double lam = dm.lambda(k, h);
        return thermal(k) * lam * lam;
    };
    auto f_ht = [&](double k) { return thermal(k) * dm.epsilon(k, h); };

    // The mode pairing (k, -k) already requires epsilon and |delta| to be
    // even in k, so every integrand above is even. Doubling the half-axis
    // integral keeps quadrature nodes away from k = 0, where a gapless
    // dispersion makes d_theta an indeterminate 0/0 even though the full
    // integrand stays bounded.
    const Prefactors pf = prefactors(beta);
    MetricComponents mc;
    mc.g_hh_c = pf.c * 2.0 * integrate(f_c, 0.0, pi, spec);
    mc.g_hh_nc = pf.nc * 2.0 * integrate(f_nc, 0.0, pi, spec);
    mc.g_tt = pf.tt * 2.0 * integrate(f_tt, 0.0, pi, spec);
    mc.g_ht = pf.ht * 2.0 * integrate(f_ht, 0.0, pi, spec);
    return mc;
}

MetricComponents omega_route(const DispersionModel& dm, double h, double beta,
                             const QuadratureSpec& spec) {
    const EnergyTransform& tr = *dm.transform;
    const double w0 = tr.omega_min(h);
    const double w1 = tr.omega_max(h);
    if (!(w1 > w0))
        throw NonConvergence("energy route: degenerate band");
    const double wm = 0.5 * (w0 + w1);

    // dk/domega carries inverse square roots at both band edges. The
    // substitutions u^2 = w^2 - w0^2 below wm and v^2 = w1^2 - w^2 above it
    // absorb them exactly: dk/du = (dk/domega) * u / w and likewise for v,
    // both bounded, so roundoff near the edges can no longer blow up the
    // adaptive refinement.
    auto eval = [&](const std::function<double(double, const EnergyPoint&)>& weight) {
        auto lower = [&](double u) {
            const double w = std::sqrt(w0 * w0 + u * u);
            const EnergyPoint p = tr.at(w, h);
            return weight(w, p) * p.dk_domega * (u / w);
        };
        auto upper = [&](double v) {
            const double w = std::sqrt(w1 * w1 - v * v);
            const EnergyPoint p = tr.at(w, h);
            return weight(w, p) * p.dk_domega * (v / w);
        };
        const double um = std::sqrt((wm - w0) * (wm + w0));
        const double vm = std::sqrt((w1 - wm) * (w1 + wm));
        return integrate(lower, 0.0, um, spec) + integrate(upper, 0.0, vm, spec);
    };

    // Both k half-axes map onto the same omega interval, hence the factor 2.
    const Prefactors pf = prefactors(beta);
    MetricComponents mc;
    mc.g_hh_c = pf.c * 2.0 * eval([beta](double w, const EnergyPoint& p) {
        return inv_cosh_plus_one(beta * w) * p.d_lambda * p.d_lambda;
    });
    mc.g_hh_nc = pf.nc * 2.0 * eval([beta](double w, const EnergyPoint& p) {
        return one_minus_sech(beta * w) * p.d_theta * p.d_theta;
    });
    mc.g_tt = pf.tt * 2.0 * eval([beta](double w, const EnergyPoint&) {
        return inv_cosh_plus_one(beta * w) * w * w;
    });
    mc.g_ht = pf.ht * 2.0 * eval([beta](double w, const EnergyPoint& p) {
        return inv_cosh_plus_one(beta * w) * p.epsilon;
    });
    return mc;
}

} // namespace

MetricComponents thermodynamic_metric_components(const DispersionModel& dm,
                                                 double h, double T,
                                                 const QuadratureSpec& spec) {
    if (!(T > 0.0))
        throw std::invalid_argument("thermodynamic_metric: T must be positive");
    const double beta = 1.0 / T;

    // A gapless spectrum makes the k integrand non-smooth at the band
    // minimum; go straight to the energy variable there.
    if (dm.transform && dm.transform->omega_min(h) <= 1e-12)
        return omega_route(dm, h, beta, spec);

    try {
        return k_route(dm, h, beta, spec);
    } catch (const NonConvergence&) {
        if (dm.transform && beta * dm.transform->omega_min(h) < 0.1)
            return omega_route(dm, h, beta, spec);
        throw;
    }
}

SymMat2 thermodynamic_metric(const DispersionModel& dm, double h, double T,
                             const QuadratureSpec& spec) {
    return thermodynamic_metric_components(dm, h, T, spec).tensor();
}

} // namespace qig::quasifree
