#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qig/errors.hpp"
#include "qig/geometry.hpp"
#include "qig/oracle.hpp"
#include "qig/scan.hpp"
#include "qig/verify.hpp"

namespace {

// Exit codes are part of the tool contract:
//   0 success, 1 usage error, 2 partial node failures, 3 numerical failure.
constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kPartial = 2;
constexpr int kNumerical = 3;

struct OutputStream {
    std::ofstream file;
    std::ostream* os = nullptr;

    bool open(const std::string& path) {
        if (path.empty()) {
            os = &std::cout;
            return true;
        }
        file.open(path);
        os = &file;
        return static_cast<bool>(file);
    }
};

void add_grid_flags(CLI::App* cmd, qig::scan::ScanConfig& cfg) {
    cmd->add_option("--h-min", cfg.h_min, "lower end of the h axis");
    cmd->add_option("--h-max", cfg.h_max, "upper end of the h axis");
    cmd->add_option("--h-count", cfg.h_count, "number of h grid points (>= 2)");
    cmd->add_option("--t-min", cfg.t_min, "lower end of the T axis (> 0)");
    cmd->add_option("--t-max", cfg.t_max, "upper end of the T axis");
    cmd->add_option("--t-count", cfg.t_count, "number of T grid points (>= 2)");
    cmd->add_option("--format", cfg.format, "output format: csv or json");
    cmd->add_option("--out", cfg.out, "output path (default: stdout)");
    cmd->add_option("--rel-tol", cfg.rel_tol, "quadrature relative tolerance for node values");
}

int report_failures(const qig::geometry::ScanGrid& grid) {
    int failures = 0;
    for (std::size_t it = 0; it < grid.t_axis.size(); ++it) {
        for (std::size_t ih = 0; ih < grid.h_axis.size(); ++ih) {
            const auto& node = grid.at(ih, it);
            if (node.failure.empty()) continue;
            ++failures;
            std::cerr << "node (h=" << grid.h_axis[ih] << ", T=" << grid.t_axis[it]
                      << "): " << node.failure << '\n';
        }
    }
    return failures;
}

int cmd_scan(const qig::scan::ScanConfig& cfg) {
    try {
        qig::scan::validate(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "scan: " << e.what() << '\n';
        return kUsage;
    }
    qig::scan::ScanResult result;
    try {
        result = qig::scan::run_scan(cfg);
    } catch (const std::exception& e) {
        std::cerr << "scan: " << e.what() << '\n';
        return kNumerical;
    }
    OutputStream out;
    if (!out.open(cfg.out)) {
        std::cerr << "scan: cannot write " << cfg.out << '\n';
        return kUsage;
    }
    if (cfg.format == "json")
        qig::scan::write_json(result, *out.os);
    else
        qig::scan::write_csv(result, *out.os);
    return report_failures(result.grid) > 0 ? kPartial : kOk;
}

void write_polylines_csv(const std::vector<qig::geometry::Polyline>& lines, std::ostream& os) {
    os << "kind,line,vertex,h,T\n";
    char buf[96];
    for (std::size_t li = 0; li < lines.size(); ++li) {
        const char* kind = lines[li].kind == qig::geometry::Polyline::Kind::ridge
                               ? "ridge"
                               : "zero_curvature";
        for (std::size_t vi = 0; vi < lines[li].points.size(); ++vi) {
            std::snprintf(buf, sizeof(buf), "%s,%zu,%zu,%.17g,%.17g\n", kind, li, vi,
                          lines[li].points[vi].x(), lines[li].points[vi].y());
            os << buf;
        }
    }
}

int cmd_crossover(const qig::scan::ScanConfig& cfg, bool synthetic_flat) {
    try {
        qig::scan::validate(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "crossover: " << e.what() << '\n';
        return kUsage;
    }
    qig::scan::ScanResult result;
    try {
        result = synthetic_flat
                     ? qig::scan::run_scan(cfg, qig::scan::flat_components(),
                                           qig::scan::flat_field(cfg))
                     : qig::scan::run_scan(cfg);
    } catch (const std::exception& e) {
        std::cerr << "crossover: " << e.what() << '\n';
        return kNumerical;
    }

    const auto contours = qig::geometry::zero_curvature_contours(result.grid);
    const auto ridges = qig::geometry::ridge_lines(result.grid);

    std::vector<qig::geometry::Polyline> all;
    all.insert(all.end(), contours.begin(), contours.end());
    all.insert(all.end(), ridges.begin(), ridges.end());

    OutputStream out;
    if (!out.open(cfg.out)) {
        std::cerr << "crossover: cannot write " << cfg.out << '\n';
        return kUsage;
    }
    if (cfg.format == "json") {
        nlohmann::ordered_json doc = nlohmann::ordered_json::array();
        for (const auto& line : all) {
            nlohmann::ordered_json entry;
            entry["kind"] = line.kind == qig::geometry::Polyline::Kind::ridge
                                ? "ridge"
                                : "zero_curvature";
            auto pts = nlohmann::ordered_json::array();
            for (const auto& p : line.points) pts.push_back({p.x(), p.y()});
            entry["points"] = std::move(pts);
            doc.push_back(std::move(entry));
        }
        *out.os << doc.dump(2) << '\n';
    } else {
        write_polylines_csv(all, *out.os);
    }

    try {
        const auto report = qig::geometry::crossover_report(ridges, contours);
        for (const auto& match : report.matches) {
            std::cerr << "ridge " << match.ridge_index << " (" << match.vertex_count
                      << " vertices): mean distance to zero-curvature lines "
                      << match.mean_distance << '\n';
        }
    } catch (const qig::NoLines&) {
        std::cerr << "crossover: ridge lines " << ridges.size()
                  << ", zero-curvature lines " << contours.size()
                  << "; no report\n";
    }
    return report_failures(result.grid) > 0 ? kPartial : kOk;
}

int cmd_verify(double rel_tol) {
    qig::QuadratureSpec spec;
    spec.rel_tol = rel_tol;
    std::vector<qig::verify::VerificationRow> rows;
    qig::verify::ConventionChecks checks;
    try {
        rows = qig::verify::verification_rows(spec);
        checks = qig::verify::convention_checks(spec);
    } catch (const std::invalid_argument& e) {
        std::cerr << "verify: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "verify: " << e.what() << '\n';
        return kNumerical;
    }
    qig::verify::write_report(std::cout, rows, checks);
    return qig::verify::all_pass(rows) ? kOk : kUsage;
}

int cmd_oracle(const qig::oracle::OracleConfig& cfg) {
    qig::oracle::OracleResult result;
    try {
        result = qig::oracle::run_oracle(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "oracle: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "oracle: " << e.what() << '\n';
        return kNumerical;
    }
    qig::oracle::write_report(std::cout, cfg, result);
    if (result.any_nan) return kNumerical;
    return result.pass() ? kOk : kUsage;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Information-geometric scans of thermal transverse-field Ising states"};
    app.require_subcommand(0, 1);

    qig::scan::ScanConfig scan_cfg;
    scan_cfg.h_min = 0.0;
    scan_cfg.h_max = 2.0;
    scan_cfg.h_count = 21;
    scan_cfg.t_min = 0.05;
    scan_cfg.t_max = 1.0;
    scan_cfg.t_count = 20;
    auto* scan_cmd = app.add_subcommand("scan", "metric, eigen-frame and curvature over a grid");
    add_grid_flags(scan_cmd, scan_cfg);

    qig::scan::ScanConfig cross_cfg = scan_cfg;
    bool synthetic_flat = false;
    auto* cross_cmd = app.add_subcommand("crossover", "zero-curvature contours and ridge lines");
    add_grid_flags(cross_cmd, cross_cfg);
    cross_cmd->add_flag("--synthetic-flat", synthetic_flat,
                        "replace the physical field by a constant metric (test hook)")
        ->group("");

    double verify_rel_tol = 1e-10;
    auto* verify_cmd = app.add_subcommand("verify", "asymptotic regime checks");
    verify_cmd->add_option("--rel-tol", verify_rel_tol, "quadrature relative tolerance");

    qig::oracle::OracleConfig oracle_cfg;
    auto* oracle_cmd = app.add_subcommand("oracle", "randomized cross-checks on small systems");
    oracle_cmd->add_option("--modes", oracle_cfg.modes, "modes per trial (1 to 6)");
    oracle_cmd->add_option("--trials", oracle_cfg.trials, "number of random trials");
    oracle_cmd->add_option("--seed", oracle_cfg.seed, "generator seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    if (*scan_cmd) return cmd_scan(scan_cfg);
    if (*cross_cmd) return cmd_crossover(cross_cfg, synthetic_flat);
    if (*verify_cmd) return cmd_verify(verify_rel_tol);
    if (*oracle_cmd) return cmd_oracle(oracle_cfg);

    std::cerr << app.help();
    return kUsage;
}
