#include "qig/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

#include "qig/errors.hpp"

namespace qig::geometry {

namespace {

bool strictly_increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] > v[i - 1])) return false;
    }
    return true;
}

}  // namespace

std::size_t ScanGrid::failure_count() const {
    std::size_t n = 0;
    for (const auto& node : nodes) {
        if (!node.failure.empty()) ++n;
    }
    return n;
}

ScanGrid eigen_field(const MetricField& mf,
                     std::vector<double> h_axis,
                     std::vector<double> t_axis) {
    if (!mf.eval) throw std::invalid_argument("eigen_field: field has no evaluator");
    if (h_axis.size() < 2 || t_axis.size() < 2)
        throw std::invalid_argument("eigen_field: axes need at least two points");
    if (!strictly_increasing(h_axis) || !strictly_increasing(t_axis))
        throw std::invalid_argument("eigen_field: axes must be strictly increasing");
    const double slack = 1e-12;
    if (h_axis.front() < mf.h_min - slack || h_axis.back() > mf.h_max + slack ||
        t_axis.front() < mf.t_min - slack || t_axis.back() > mf.t_max + slack)
        throw std::invalid_argument("eigen_field: grid leaves the field domain");

    ScanGrid sg;
    sg.h_axis = std::move(h_axis);
    sg.t_axis = std::move(t_axis);
    sg.nodes.resize(sg.h_axis.size() * sg.t_axis.size());
    for (std::size_t it = 0; it < sg.t_axis.size(); ++it) {
        for (std::size_t ih = 0; ih < sg.h_axis.size(); ++ih) {
            GridNode& node = sg.at(ih, it);
            try {
                node.g = mf.eval(sg.h_axis[ih], sg.t_axis[it]);
                node.frame = eigen2(node.g);
                node.ok = true;
            } catch (const std::exception& e) {
                node.ok = false;
                node.failure = e.what();
            }
        }
    }
    return sg;
}

double gaussian_curvature(const MetricField& mf, double h, double t, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("gaussian_curvature: step must be positive");
    if (h - mf.h_min < 2.0 * step || mf.h_max - h < 2.0 * step ||
        t - mf.t_min < 2.0 * step || mf.t_max - t < 2.0 * step)
        throw std::invalid_argument("gaussian_curvature: point closer than 2*step to the boundary");

    const SymMat2 c = mf.eval(h, t);
    const double tr = c.trace();
    const double deg_eps = 1e-12 * tr * tr;
    if (c.det() <= deg_eps)
        throw DegenerateMetric("gaussian_curvature: metric numerically degenerate at the probe point");

    // Stencil: centre, the four axis neighbours and the four diagonal
    // neighbours, giving every first and second derivative of E, F, G that
    // the Brioschi formula needs.
    const SymMat2 px = mf.eval(h + step, t);
    const SymMat2 mx = mf.eval(h - step, t);
    const SymMat2 py = mf.eval(h, t + step);
    const SymMat2 my = mf.eval(h, t - step);
    const SymMat2 pp = mf.eval(h + step, t + step);
    const SymMat2 pm = mf.eval(h + step, t - step);
    const SymMat2 mp = mf.eval(h - step, t + step);
    const SymMat2 mm = mf.eval(h - step, t - step);

    const double s = step;
    const double E = c.a11, F = c.a12, G = c.a22;
    const double E_u = (px.a11 - mx.a11) / (2.0 * s);
    const double E_v = (py.a11 - my.a11) / (2.0 * s);
    const double E_vv = (py.a11 - 2.0 * E + my.a11) / (s * s);
    const double F_u = (px.a12 - mx.a12) / (2.0 * s);
    const double F_v = (py.a12 - my.a12) / (2.0 * s);
    const double F_uv = (pp.a12 - pm.a12 - mp.a12 + mm.a12) / (4.0 * s * s);
    const double G_u = (px.a22 - mx.a22) / (2.0 * s);
    const double G_v = (py.a22 - my.a22) / (2.0 * s);
    const double G_uu = (px.a22 - 2.0 * G + mx.a22) / (s * s);

    Eigen::Matrix3d m1, m2;
    m1 << -0.5 * E_vv + F_uv - 0.5 * G_uu, 0.5 * E_u, F_u - 0.5 * E_v,
          F_v - 0.5 * G_u,                 E,         F,
          0.5 * G_v,                       F,         G;
    m2 << 0.0,       0.5 * E_v, 0.5 * G_u,
          0.5 * E_v, E,         F,
          0.5 * G_u, F,         G;

    const double det_g = E * G - F * F;
    return (m1.determinant() - m2.determinant()) / (det_g * det_g);
}

double curvature_step(const std::vector<double>& h_axis,
                      const std::vector<double>& t_axis) {
    if (h_axis.size() < 2 || t_axis.size() < 2)
        throw std::invalid_argument("curvature_step: axes need at least two points");
    double spacing = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < h_axis.size(); ++i)
        spacing = std::min(spacing, h_axis[i] - h_axis[i - 1]);
    for (std::size_t i = 1; i < t_axis.size(); ++i)
        spacing = std::min(spacing, t_axis[i] - t_axis[i - 1]);
    return std::max(1e-4, 1e-3 * spacing);
}

void fill_curvature(ScanGrid& sg, const MetricField& mf, double step) {
    for (std::size_t it = 0; it < sg.t_axis.size(); ++it) {
        for (std::size_t ih = 0; ih < sg.h_axis.size(); ++ih) {
            GridNode& node = sg.at(ih, it);
            if (!node.ok) continue;
            const double h = sg.h_axis[ih];
            const double t = sg.t_axis[it];
            if (h - mf.h_min < 2.0 * step || mf.h_max - h < 2.0 * step ||
                t - mf.t_min < 2.0 * step || mf.t_max - t < 2.0 * step)
                continue;  // too close to the boundary, leave NaN
            try {
                node.curvature = gaussian_curvature(mf, h, t, step);
            } catch (const std::exception& e) {
                node.failure = std::string("curvature: ") + e.what();
            }
        }
    }
}

namespace {

// Grid-edge identifiers for contour extraction. Orientation 0 is the edge
// from (ih, it) to (ih+1, it), orientation 1 the edge from (ih, it) to
// (ih, it+1). Crossing points are computed once per edge so that segments in
// adjacent cells share their endpoints exactly.
std::size_t edge_key(int orient, std::size_t ih, std::size_t it,
                     std::size_t nh, std::size_t nt) {
    return static_cast<std::size_t>(orient) * (nh * nt) + it * nh + ih;
}

struct Chains {
    std::map<std::size_t, Eigen::Vector2d> point;       // edge key -> crossing
    std::vector<std::pair<std::size_t, std::size_t>> segments;
};

std::vector<Polyline> chain_segments(const Chains& ch, Polyline::Kind kind) {
    std::map<std::size_t, std::vector<std::size_t>> incident;
    for (std::size_t si = 0; si < ch.segments.size(); ++si) {
        incident[ch.segments[si].first].push_back(si);
        incident[ch.segments[si].second].push_back(si);
    }

    std::vector<bool> used(ch.segments.size(), false);
    std::vector<Polyline> out;

    auto walk = [&](std::size_t start) {
        Polyline pl;
        pl.kind = kind;
        pl.points.push_back(ch.point.at(start));
        std::size_t current = start;
        for (;;) {
            const auto& segs = incident.at(current);
            std::size_t next_seg = ch.segments.size();
            for (std::size_t si : segs) {
                if (!used[si]) { next_seg = si; break; }
            }
            if (next_seg == ch.segments.size()) break;
            used[next_seg] = true;
            const auto& [a, b] = ch.segments[next_seg];
            current = (a == current) ? b : a;
            const Eigen::Vector2d& p = ch.point.at(current);
            if ((p - pl.points.back()).norm() > 0.0) pl.points.push_back(p);
        }
        if (pl.points.size() >= 2) out.push_back(std::move(pl));
    };

    // Open chains first, started from their endpoints in key order, then any
    // remaining closed loops. Both passes are deterministic.
    for (const auto& [key, segs] : incident) {
        if (segs.size() == 1 && !used[segs.front()]) walk(key);
    }
    for (std::size_t si = 0; si < ch.segments.size(); ++si) {
        if (!used[si]) walk(ch.segments[si].first);
    }
    return out;
}

}  // namespace

std::vector<Polyline> zero_curvature_contours(const ScanGrid& sg) {
    const std::size_t nh = sg.h_axis.size();
    const std::size_t nt = sg.t_axis.size();
    auto curv = [&](std::size_t ih, std::size_t it) { return sg.at(ih, it).curvature; };
    auto has = [&](std::size_t ih, std::size_t it) {
        return sg.at(ih, it).ok && std::isfinite(curv(ih, it));
    };
    auto negative = [&](std::size_t ih, std::size_t it) { return curv(ih, it) < 0.0; };

    Chains ch;
    auto cross_edge = [&](int orient, std::size_t ih, std::size_t it) {
        const std::size_t jh = orient == 0 ? ih + 1 : ih;
        const std::size_t jt = orient == 0 ? it : it + 1;
        if (!has(ih, it) || !has(jh, jt)) return;
        if (negative(ih, it) == negative(jh, jt)) return;
        const double k0 = curv(ih, it), k1 = curv(jh, jt);
        const double f = k0 / (k0 - k1);
        Eigen::Vector2d p(sg.h_axis[ih], sg.t_axis[it]);
        if (orient == 0)
            p.x() += f * (sg.h_axis[ih + 1] - sg.h_axis[ih]);
        else
            p.y() += f * (sg.t_axis[it + 1] - sg.t_axis[it]);
        ch.point.emplace(edge_key(orient, ih, it, nh, nt), p);
    };
    for (std::size_t it = 0; it < nt; ++it)
        for (std::size_t ih = 0; ih + 1 < nh; ++ih) cross_edge(0, ih, it);
    for (std::size_t it = 0; it + 1 < nt; ++it)
        for (std::size_t ih = 0; ih < nh; ++ih) cross_edge(1, ih, it);

    for (std::size_t it = 0; it + 1 < nt; ++it) {
        for (std::size_t ih = 0; ih + 1 < nh; ++ih) {
            if (!has(ih, it) || !has(ih + 1, it) || !has(ih + 1, it + 1) || !has(ih, it + 1))
                continue;
            const std::size_t bottom = edge_key(0, ih, it, nh, nt);
            const std::size_t right = edge_key(1, ih + 1, it, nh, nt);
            const std::size_t top = edge_key(0, ih, it + 1, nh, nt);
            const std::size_t left = edge_key(1, ih, it, nh, nt);
            std::vector<std::size_t> crossed;
            for (std::size_t k : {bottom, right, top, left})
                if (ch.point.count(k)) crossed.push_back(k);
            if (crossed.size() == 2) {
                ch.segments.emplace_back(crossed[0], crossed[1]);
            } else if (crossed.size() == 4) {
                // Saddle cell: both diagonals disagree. The centre sample of
                // the bilinear interpolant decides which corner pair the
                // contour separates.
                const double centre = 0.25 * (curv(ih, it) + curv(ih + 1, it) +
                                              curv(ih + 1, it + 1) + curv(ih, it + 1));
                if ((centre < 0.0) == negative(ih, it)) {
                    ch.segments.emplace_back(bottom, right);
                    ch.segments.emplace_back(top, left);
                } else {
                    ch.segments.emplace_back(bottom, left);
                    ch.segments.emplace_back(top, right);
                }
            }
        }
    }
    return chain_segments(ch, Polyline::Kind::zero_curvature);
}

std::vector<Polyline> ridge_lines(const ScanGrid& sg) {
    const std::size_t nh = sg.h_axis.size();
    const std::size_t nt = sg.t_axis.size();
    std::vector<char> is_ridge(nh * nt, 0);
    auto idx = [&](std::size_t ih, std::size_t it) { return it * nh + ih; };

    for (std::size_t it = 1; it + 1 < nt; ++it) {
        for (std::size_t ih = 1; ih + 1 < nh; ++ih) {
            const GridNode& node = sg.at(ih, it);
            if (!node.ok) continue;
            const bool along_h = std::abs(node.frame.v_min.x()) >= std::abs(node.frame.v_min.y());
            const GridNode& prev = along_h ? sg.at(ih - 1, it) : sg.at(ih, it - 1);
            const GridNode& next = along_h ? sg.at(ih + 1, it) : sg.at(ih, it + 1);
            if (!prev.ok || !next.ok) continue;
            if (node.frame.lambda_max > prev.frame.lambda_max &&
                node.frame.lambda_max > next.frame.lambda_max)
                is_ridge[idx(ih, it)] = 1;
        }
    }

    // Chain ridge nodes through 8-neighbourhood adjacency, walking each
    // connected component from its lowest-index endpoint.
    std::vector<std::size_t> ridge_nodes;
    for (std::size_t i = 0; i < is_ridge.size(); ++i)
        if (is_ridge[i]) ridge_nodes.push_back(i);

    auto neighbours = [&](std::size_t i) {
        std::vector<std::size_t> out;
        const std::size_t ih = i % nh, it = i / nh;
        for (int dt = -1; dt <= 1; ++dt) {
            for (int dh = -1; dh <= 1; ++dh) {
                if (dh == 0 && dt == 0) continue;
                const long jh = static_cast<long>(ih) + dh;
                const long jt = static_cast<long>(it) + dt;
                if (jh < 0 || jt < 0 || jh >= static_cast<long>(nh) || jt >= static_cast<long>(nt))
                    continue;
                const std::size_t j = static_cast<std::size_t>(jt) * nh + static_cast<std::size_t>(jh);
                if (is_ridge[j]) out.push_back(j);
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    };

    std::vector<char> visited(nh * nt, 0);
    std::vector<Polyline> out;
    auto emit_walk = [&](std::size_t start) {
        Polyline pl;
        pl.kind = Polyline::Kind::ridge;
        std::size_t current = start;
        visited[current] = 1;
        pl.points.emplace_back(sg.h_axis[current % nh], sg.t_axis[current / nh]);
        for (;;) {
            std::size_t next = is_ridge.size();
            for (std::size_t j : neighbours(current)) {
                if (!visited[j]) { next = j; break; }
            }
            if (next == is_ridge.size()) break;
            visited[next] = 1;
            pl.points.emplace_back(sg.h_axis[next % nh], sg.t_axis[next / nh]);
            current = next;
        }
        out.push_back(std::move(pl));
    };

    for (std::size_t i : ridge_nodes) {
        if (visited[i]) continue;
        // Prefer an endpoint of the component containing i: breadth-first
        // collect, then walk from the lowest-index node of minimal degree.
        std::vector<std::size_t> comp{i};
        std::vector<char> seen(nh * nt, 0);
        seen[i] = 1;
        for (std::size_t q = 0; q < comp.size(); ++q) {
            for (std::size_t j : neighbours(comp[q])) {
                if (!seen[j]) { seen[j] = 1; comp.push_back(j); }
            }
        }
        std::sort(comp.begin(), comp.end());
        while (true) {
            std::size_t best = is_ridge.size();
            std::size_t best_deg = SIZE_MAX;
            for (std::size_t j : comp) {
                if (visited[j]) continue;
                std::size_t deg = 0;
                for (std::size_t k : neighbours(j))
                    if (!visited[k]) ++deg;
                if (deg < best_deg) { best_deg = deg; best = j; }
            }
            if (best == is_ridge.size()) break;
            emit_walk(best);
        }
    }
    return out;
}

namespace {

double point_segment_distance(const Eigen::Vector2d& p,
                              const Eigen::Vector2d& a,
                              const Eigen::Vector2d& b) {
    const Eigen::Vector2d ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    const double f = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + f * ab)).norm();
}

}  // namespace

CrossoverReport crossover_report(const std::vector<Polyline>& ridges,
                                 const std::vector<Polyline>& contours) {
    if (ridges.empty())
        throw NoLines("crossover_report: no ridge polylines");
    if (contours.empty())
        throw NoLines("crossover_report: no zero-curvature polylines");

    CrossoverReport report;
    for (std::size_t ri = 0; ri < ridges.size(); ++ri) {
        const Polyline& ridge = ridges[ri];
        double total = 0.0;
        for (const auto& vertex : ridge.points) {
            double dmin = std::numeric_limits<double>::infinity();
            for (const auto& contour : contours) {
                if (contour.points.size() == 1) {
                    dmin = std::min(dmin, (vertex - contour.points.front()).norm());
                    continue;
                }
                for (std::size_t i = 0; i + 1 < contour.points.size(); ++i)
                    dmin = std::min(dmin, point_segment_distance(vertex, contour.points[i],
                                                                 contour.points[i + 1]));
            }
            total += dmin;
        }
        RidgeMatch match;
        match.ridge_index = ri;
        match.vertex_count = ridge.points.size();
        match.mean_distance = ridge.points.empty() ? 0.0 : total / static_cast<double>(ridge.points.size());
        report.matches.push_back(match);
    }
    return report;
}

CrossoverReport crossover_report(const ScanGrid& sg) {
    return crossover_report(ridge_lines(sg), zero_curvature_contours(sg));
}

}  // namespace qig::geometry
