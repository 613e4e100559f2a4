#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qig/numerics.hpp"

namespace qig::verify {

// One asymptotic-regime check: a numeric metric quantity at a probe point
// against the closed-form regime prediction, judged as a ratio.
struct VerificationRow {
    std::string name;
    double h = 0.0;
    double t = 0.0;           // 0 marks a zero-temperature limit row
    double predicted = 0.0;
    double numeric = 0.0;
    double ratio = 0.0;       // numeric / predicted
    double tolerance = 0.0;   // pass iff |ratio - 1| <= tolerance ...
    bool upper_bound = false; // ... unless set: pass iff numeric < predicted
    bool pass = false;
};

// Numerical confirmations of the two normalization conventions used across
// the library, printed with every report:
//  - the dbeta dh series coefficient g_hb is twice the symmetric tensor
//    element (factor below evaluates to 2);
//  - the per-site non-classical integral is normalized to twice the
//    finite-chain mode-sum limit (ratio below evaluates to 1/2).
struct ConventionChecks {
    double ght_factor = 0.0;
    double nc_ratio = 0.0;
};

std::vector<VerificationRow> verification_rows(const QuadratureSpec& spec = {});
ConventionChecks convention_checks(const QuadratureSpec& spec = {});
bool all_pass(const std::vector<VerificationRow>& rows);
void write_report(std::ostream& os, const std::vector<VerificationRow>& rows,
                  const ConventionChecks& checks);

}  // namespace qig::verify
