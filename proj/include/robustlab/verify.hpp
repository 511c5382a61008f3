#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace robustlab {

/// Result of one verification check. observed is the operative statistic,
/// bound the requirement it is compared against, tolerance the slack the
/// check grants; detail carries the sub-measurements. Reports contain no
/// timing or thread-count information, so reruns with different worker
/// counts must produce byte-identical output.
struct VerifyReport {
    std::string check;
    bool pass = false;
    double observed = 0.0;
    double bound = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

/// The checks of the "all" suite, in execution order.
std::vector<std::string> verify_check_names();

/// Resolves a suite or check name to the checks it runs. Known suites:
/// "all", "trivial", "gaussian-lower", plus every individual check name.
std::vector<std::string> resolve_verify_selection(const std::string& selection);

std::vector<VerifyReport> run_verify(const std::string& selection, std::uint64_t seed,
                                     int threads);

std::string format_report(const VerifyReport& report);

}  // namespace robustlab
