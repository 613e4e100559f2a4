// End-to-end checks of the command line tool. The harness exports CLI_BIN
// with the path of the built executable; every test is a real process run.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

std::string cli_bin() {
    const char* bin = std::getenv("CLI_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "CLI_BIN must point at the built executable");
    return bin;
}

int run_cli(const std::string& args) {
    const std::string cmd = cli_bin() + " " + args;
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE_MESSAGE(in.good(), "expected output file ", path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

// Comma split that keeps empty fields, including a trailing one.
std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

constexpr const char* kScanHeader =
    "h,T,g_hh,g_hT,g_TT,g_hh_classical,g_hh_nonclassical,"
    "lambda_max,lambda_min,vmax_h,vmax_T,curvature";

const std::string kSmallGrid =
    "--h-min 0.5 --h-max 0.7 --h-count 2 --t-min 0.4 --t-max 0.5 --t-count 2";

}  // namespace

TEST_CASE("scan emits the documented table with curvature on interior nodes") {
    const int rc = run_cli(
        "scan --h-min 1.9 --h-max 2.1 --h-count 3 "
        "--t-min 1.9 --t-max 2.1 --t-count 3 --out scan33.csv 2>/dev/null");
    CHECK(rc == 0);

    const auto lines = split_lines(read_file("scan33.csv"));
    REQUIRE(lines.size() == 10);
    CHECK(lines[0] == kScanHeader);

    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto fields = split_fields(lines[r]);
        REQUIRE(fields.size() == 12);
        for (std::size_t c = 0; c < 11; ++c)
            CHECK(std::isfinite(std::stod(fields[c])));

        const double g_hh = std::stod(fields[2]);
        const double g_tt = std::stod(fields[4]);
        const double lmax = std::stod(fields[7]);
        const double lmin = std::stod(fields[8]);
        CHECK(g_hh > 0.0);
        CHECK(g_tt > 0.0);
        CHECK(lmax >= lmin);
        CHECK(lmin > 0.0);
        const double vh = std::stod(fields[9]);
        const double vt = std::stod(fields[10]);
        CHECK(vh * vh + vt * vt == doctest::Approx(1.0).epsilon(1e-12));

        // Only the middle node is far enough from the grid boundary for the
        // curvature stencil; every other row leaves the column blank.
        if (r == 5) {
            REQUIRE(!fields[11].empty());
            CHECK(std::isfinite(std::stod(fields[11])));
            CHECK(std::stod(fields[0]) == doctest::Approx(2.0));
            CHECK(std::stod(fields[1]) == doctest::Approx(2.0));
        } else {
            CHECK(fields[11].empty());
        }
    }

    // Row order: T-major, h-minor.
    CHECK(std::stod(split_fields(lines[1])[0]) == doctest::Approx(1.9));
    CHECK(std::stod(split_fields(lines[1])[1]) == doctest::Approx(1.9));
    CHECK(std::stod(split_fields(lines[2])[0]) == doctest::Approx(2.0));
    CHECK(std::stod(split_fields(lines[2])[1]) == doctest::Approx(1.9));
    CHECK(std::stod(split_fields(lines[4])[1]) == doctest::Approx(2.0));
}

TEST_CASE("repeated scans are byte identical") {
    CHECK(run_cli("scan " + kSmallGrid + " --out det_a.csv 2>/dev/null") == 0);
    CHECK(run_cli("scan " + kSmallGrid + " --out det_b.csv 2>/dev/null") == 0);
    const auto a = read_file("det_a.csv");
    CHECK(a == read_file("det_b.csv"));
    CHECK(!a.empty());
}

TEST_CASE("csv and json carry bitwise identical values") {
    CHECK(run_cli("scan " + kSmallGrid + " --out rt.csv 2>/dev/null") == 0);
    CHECK(run_cli("scan " + kSmallGrid + " --format json --out rt.json 2>/dev/null") == 0);

    const auto lines = split_lines(read_file("rt.csv"));
    REQUIRE(lines.size() == 5);
    const auto doc = nlohmann::json::parse(read_file("rt.json"));
    REQUIRE(doc.is_array());
    REQUIRE(doc.size() == 4);

    const char* keys[] = {"h",       "T",          "g_hh",       "g_hT",
                          "g_TT",    "g_hh_classical", "g_hh_nonclassical",
                          "lambda_max", "lambda_min", "vmax_h",   "vmax_T"};
    for (std::size_t r = 0; r < 4; ++r) {
        const auto fields = split_fields(lines[r + 1]);
        REQUIRE(fields.size() == 12);
        for (std::size_t c = 0; c < 11; ++c) {
            const double from_csv = std::stod(fields[c]);
            const double from_json = doc[r][keys[c]].get<double>();
            CHECK(from_csv == from_json);
        }
        // All four nodes sit on the grid boundary, so curvature is absent in
        // both encodings.
        CHECK(fields[11].empty());
        CHECK(doc[r]["curvature"].is_null());
    }
}

TEST_CASE("zero transverse field gives an axis-aligned eigenframe") {
    CHECK(run_cli("scan --h-min 0 --h-max 0.5 --h-count 2 "
                  "--t-min 0.3 --t-max 0.6 --t-count 2 --out h0.csv 2>/dev/null") == 0);
    const auto lines = split_lines(read_file("h0.csv"));
    REQUIRE(lines.size() == 5);
    int h0_rows = 0;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto fields = split_fields(lines[r]);
        if (std::stod(fields[0]) != 0.0) continue;
        ++h0_rows;
        CHECK(std::abs(std::stod(fields[3])) < 1e-10);  // g_hT vanishes
        const double vh = std::stod(fields[9]);
        const double vt = std::stod(fields[10]);
        CHECK(std::abs(vh * vt) < 1e-8);
    }
    CHECK(h0_rows == 2);
}

TEST_CASE("usage errors exit with code 1") {
    CHECK(run_cli("scan --h-count 1 2>/dev/null") == 1);
    CHECK(run_cli("scan --format yaml 2>/dev/null") == 1);
    CHECK(run_cli("scan " + kSmallGrid + " --out /nonexistent/dir/x.csv 2>/dev/null") == 1);
    CHECK(run_cli("scan --bogus-flag 2>/dev/null") == 1);
    CHECK(run_cli("2>/dev/null") == 1);  // no subcommand: help plus exit 1
    CHECK(run_cli("oracle --modes 9 --trials 1 2>/dev/null") == 1);
}

TEST_CASE("oracle subcommand passes on verified seeds") {
    CHECK(run_cli("oracle --modes 1 --trials 20 --seed 7 >oracle1.txt 2>/dev/null") == 0);
    CHECK(!read_file("oracle1.txt").empty());
    CHECK(run_cli("oracle --modes 3 --trials 10 --seed 7 >/dev/null 2>/dev/null") == 0);
}

TEST_CASE("verify report and exit code agree") {
    const int rc = run_cli("verify >verify_report.txt 2>/dev/null");
    const auto report = read_file("verify_report.txt");
    const auto lines = split_lines(report);

    int pass_rows = 0;
    int fail_rows = 0;
    bool catalan_pass = false;
    bool cft_pass = false;
    for (const auto& line : lines) {
        const bool p = line.size() >= 4 && line.substr(line.size() - 4) == "PASS";
        const bool f = line.size() >= 4 && line.substr(line.size() - 4) == "FAIL";
        pass_rows += p;
        fail_rows += f;
        if (line.find("catalan_critical") != std::string::npos && p) catalan_pass = true;
        if (line.find("gtt_cft") != std::string::npos && p) cft_pass = true;
    }
    CHECK(pass_rows + fail_rows >= 13);
    CHECK(catalan_pass);
    CHECK(cft_pass);
    CHECK(rc == (fail_rows > 0 ? 1 : 0));

    CHECK(report.find("g_hT convention factor") != std::string::npos);
    CHECK(report.find("non-classical normalization") != std::string::npos);
}

TEST_CASE("crossover on a flat synthetic field reports no lines") {
    const int rc = run_cli(
        "crossover --synthetic-flat --h-min 0 --h-max 1 --h-count 5 "
        "--t-min 0.1 --t-max 1 --t-count 5 --out flat_lines.csv 2>flat_err.txt");
    CHECK(rc == 0);
    CHECK(read_file("flat_lines.csv") == "kind,line,vertex,h,T\n");
    CHECK(read_file("flat_err.txt").find("no report") != std::string::npos);

    CHECK(run_cli("crossover --synthetic-flat --h-min 0 --h-max 1 --h-count 5 "
                  "--t-min 0.1 --t-max 1 --t-count 5 --format json "
                  "--out flat_lines.json 2>/dev/null") == 0);
    CHECK(read_file("flat_lines.json") == "[]\n");
}

TEST_CASE("crossover on the physical field finds zero-curvature contours") {
    const int rc = run_cli(
        "crossover --h-min 1.05 --h-max 1.6 --h-count 8 "
        "--t-min 0.02 --t-max 0.8 --t-count 8 --out cross.csv 2>/dev/null");
    CHECK(rc == 0);

    const auto lines = split_lines(read_file("cross.csv"));
    REQUIRE(lines.size() >= 2);
    CHECK(lines[0] == "kind,line,vertex,h,T");
    int contour_rows = 0;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto fields = split_fields(lines[r]);
        REQUIRE(fields.size() == 5);
        const double h = std::stod(fields[3]);
        const double t = std::stod(fields[4]);
        CHECK(h >= 1.05 - 1e-9);
        CHECK(h <= 1.6 + 1e-9);
        CHECK(t >= 0.02 - 1e-9);
        CHECK(t <= 0.8 + 1e-9);
        if (fields[0] == "zero_curvature") ++contour_rows;
    }
    CHECK(contour_rows >= 2);
}
