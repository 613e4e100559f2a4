#include "qig/scan.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "qig/ising.hpp"

namespace qig::scan {

void validate(const ScanConfig& cfg) {
    if (cfg.h_count < 2 || cfg.t_count < 2)
        throw std::invalid_argument("scan: axis counts must be at least 2");
    if (!(cfg.t_min > 0.0))
        throw std::invalid_argument("scan: T_min must be positive");
    if (!(cfg.h_max > cfg.h_min) || !(cfg.t_max > cfg.t_min))
        throw std::invalid_argument("scan: max must exceed min on both axes");
    if (cfg.format != "csv" && cfg.format != "json")
        throw std::invalid_argument("scan: format must be csv or json");
    if (!(cfg.rel_tol > 0.0))
        throw std::invalid_argument("scan: rel-tol must be positive");
}

std::vector<double> linspace(double a, double b, int count) {
    if (count < 2) throw std::invalid_argument("linspace: count must be at least 2");
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        v[static_cast<std::size_t>(i)] = a + (b - a) * static_cast<double>(i) / (count - 1);
    v.back() = b;
    return v;
}

ComponentEval ising_components(const QuadratureSpec& spec) {
    return [spec](double h, double t) { return ising::metric_components_at(h, t, spec); };
}

geometry::MetricField ising_field(const ScanConfig& cfg, const QuadratureSpec& spec) {
    geometry::MetricField mf;
    mf.eval = [spec](double h, double t) { return ising::metric_at(h, t, spec); };
    mf.h_min = cfg.h_min;
    mf.h_max = cfg.h_max;
    mf.t_min = cfg.t_min;
    mf.t_max = cfg.t_max;
    return mf;
}

ComponentEval flat_components() {
    return [](double, double) {
        quasifree::MetricComponents mc;
        mc.g_hh_c = 1.0;
        mc.g_hh_nc = 0.0;
        mc.g_ht = 0.0;
        mc.g_tt = 1.0;
        return mc;
    };
}

geometry::MetricField flat_field(const ScanConfig& cfg) {
    geometry::MetricField mf;
    mf.eval = [](double, double) { return SymMat2{1.0, 0.0, 1.0}; };
    mf.h_min = cfg.h_min;
    mf.h_max = cfg.h_max;
    mf.t_min = cfg.t_min;
    mf.t_max = cfg.t_max;
    return mf;
}

ScanResult run_scan(const ScanConfig& cfg) {
    QuadratureSpec node_spec;
    node_spec.rel_tol = cfg.rel_tol;
    // The Brioschi stencil divides second differences by step^2 ~ 1e-8, so
    // the metric under the stencil is integrated to near machine accuracy.
    QuadratureSpec stencil_spec;
    stencil_spec.rel_tol = 1e-13;
    stencil_spec.abs_tol = 1e-18;
    stencil_spec.max_subdivisions = 4000;
    return run_scan(cfg, ising_components(node_spec), ising_field(cfg, stencil_spec));
}

ScanResult run_scan(const ScanConfig& cfg, const ComponentEval& node_eval,
                    const geometry::MetricField& stencil_field) {
    validate(cfg);
    ScanResult result;
    result.grid.h_axis = linspace(cfg.h_min, cfg.h_max, cfg.h_count);
    result.grid.t_axis = linspace(cfg.t_min, cfg.t_max, cfg.t_count);
    const std::size_t n = result.grid.h_axis.size() * result.grid.t_axis.size();
    result.grid.nodes.resize(n);
    result.g_hh_classical.assign(n, std::numeric_limits<double>::quiet_NaN());
    result.g_hh_nonclassical.assign(n, std::numeric_limits<double>::quiet_NaN());

    for (std::size_t it = 0; it < result.grid.t_axis.size(); ++it) {
        for (std::size_t ih = 0; ih < result.grid.h_axis.size(); ++ih) {
            geometry::GridNode& node = result.grid.at(ih, it);
            const std::size_t flat = it * result.grid.h_axis.size() + ih;
            try {
                const quasifree::MetricComponents mc =
                    node_eval(result.grid.h_axis[ih], result.grid.t_axis[it]);
                node.g = mc.tensor();
                node.frame = eigen2(node.g);
                node.ok = true;
                result.g_hh_classical[flat] = mc.g_hh_c;
                result.g_hh_nonclassical[flat] = mc.g_hh_nc;
            } catch (const std::exception& e) {
                node.ok = false;
                node.failure = e.what();
            }
        }
    }

    geometry::fill_curvature(result.grid, stencil_field,
                             geometry::curvature_step(result.grid.h_axis, result.grid.t_axis));
    return result;
}

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

void write_csv(const ScanResult& result, std::ostream& os) {
    os << "h,T,g_hh,g_hT,g_TT,g_hh_classical,g_hh_nonclassical,"
          "lambda_max,lambda_min,vmax_h,vmax_T,curvature\n";
    const auto& sg = result.grid;
    for (std::size_t it = 0; it < sg.t_axis.size(); ++it) {
        for (std::size_t ih = 0; ih < sg.h_axis.size(); ++ih) {
            const geometry::GridNode& node = sg.at(ih, it);
            if (!node.ok) continue;
            const std::size_t flat = it * sg.h_axis.size() + ih;
            os << fmt17(sg.h_axis[ih]) << ',' << fmt17(sg.t_axis[it]) << ','
               << fmt17(node.g.a11) << ',' << fmt17(node.g.a12) << ','
               << fmt17(node.g.a22) << ','
               << fmt17(result.g_hh_classical[flat]) << ','
               << fmt17(result.g_hh_nonclassical[flat]) << ','
               << fmt17(node.frame.lambda_max) << ',' << fmt17(node.frame.lambda_min) << ','
               << fmt17(node.frame.v_max.x()) << ',' << fmt17(node.frame.v_max.y()) << ',';
            if (std::isfinite(node.curvature)) os << fmt17(node.curvature);
            os << '\n';
        }
    }
}

void write_json(const ScanResult& result, std::ostream& os) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    const auto& sg = result.grid;
    for (std::size_t it = 0; it < sg.t_axis.size(); ++it) {
        for (std::size_t ih = 0; ih < sg.h_axis.size(); ++ih) {
            const geometry::GridNode& node = sg.at(ih, it);
            if (!node.ok) continue;
            const std::size_t flat = it * sg.h_axis.size() + ih;
            nlohmann::ordered_json row;
            row["h"] = sg.h_axis[ih];
            row["T"] = sg.t_axis[it];
            row["g_hh"] = node.g.a11;
            row["g_hT"] = node.g.a12;
            row["g_TT"] = node.g.a22;
            row["g_hh_classical"] = result.g_hh_classical[flat];
            row["g_hh_nonclassical"] = result.g_hh_nonclassical[flat];
            row["lambda_max"] = node.frame.lambda_max;
            row["lambda_min"] = node.frame.lambda_min;
            row["vmax_h"] = node.frame.v_max.x();
            row["vmax_T"] = node.frame.v_max.y();
            if (std::isfinite(node.curvature))
                row["curvature"] = node.curvature;
            else
                row["curvature"] = nullptr;
            rows.push_back(std::move(row));
        }
    }
    os << rows.dump(2) << '\n';
}

}  // namespace qig::scan
