#pragma once

#include <string>
#include <vector>

#include "tracelab/limits.hpp"

namespace tracelab {

struct AcceptOptions {
    Thresholds thresholds;
    /// Replace T0's k = 10 plateau by 1.01 times its value (mutation check).
    bool tamper_t0 = false;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string measured;
    double seconds = 0.0;
    double budget = 0.0;
};

inline constexpr int kCriteria = 10;

CriterionResult run_criterion(int id, const AcceptOptions& options = {});
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids, const AcceptOptions& options = {});

/// "PASS criterion 3 (...): measured ... [1.2 s / 10 s]".
std::string format_result(const CriterionResult& r);

/// Threshold overrides: "strict=10x", or comma-separated
/// periodicity=, vanishing=, convergence= values.  Throws ConfigError.
Thresholds parse_thresholds(const std::string& text, Thresholds base = {});

}  // namespace tracelab
