#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace connectgraph {

struct CheckResult {
    std::string suite;
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Suite names in run order.
std::vector<std::string> verify_suites();

/// Runs one suite, or every suite for "all". Unknown names throw ValidationError.
/// Results carry no timing, so the report is byte-stable.
std::vector<CheckResult> run_verify(std::string_view suite = "all");

/// "PASS suite/name: detail" lines followed by a summary line.
std::string format_report(const std::vector<CheckResult>& results);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace connectgraph
