#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cha/eval/classify.hpp"
#include "cha/eval/scores.hpp"

namespace cha::eval {

struct EvalReport {
    std::optional<PlannerMetrics> planner;
    std::vector<PathClass> classes;  // per trace, in trace-set order
    std::optional<ScoreMatrix> scores;

    friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

enum class ReportFormat { text, json };

std::string emit_report(const EvalReport& report, ReportFormat format);

/// Inverse of the json rendering. Throws Errc::parse_error.
EvalReport parse_report_json(std::string_view text);

}  // namespace cha::eval
