#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cha/domain/plan.hpp"
#include "cha/planner/lm.hpp"
#include "cha/tools/registry.hpp"

namespace cha {

inline constexpr std::string_view kFinalPlanLabel = "FINAL_PLAN";

/// Tree-of-Thought planning prompt: tool block, query, memory summary, the three
/// deliberation directives and the FINAL_PLAN output contract.
/// Throws Errc::invalid_argument when `descriptions` is empty.
LmRequest build_planner_prompt(std::string_view query, std::string_view memory_summary,
                               std::string_view descriptions);

/// Extracts the last FINAL_PLAN block and the deliberation text before it.
/// Throws Errc::no_final_plan_block, malformed_step, empty_plan.
Plan parse_plan(std::string_view llm_output);

/// A FINAL_PLAN fenced block for `chosen`, parseable by parse_plan.
std::string render_plan_block(const std::vector<TaskInvocation>& chosen);

/// Checks task names, parameter types and reference targets against the registry.
/// Throws Errc::unknown_task, bad_reference, type_mismatch.
Plan validate_plan(Plan plan, const ToolRegistry& registry);

struct PlannerOptions {
    double temperature = 0.0;
    int max_output_tokens = 1024;
};

/// Diagnostics for one planning attempt sequence (at most two backend calls).
struct PlanningAttempts {
    std::optional<Plan> plan;
    std::vector<std::string> raw_outputs;
    std::string last_error;
};

PlanningAttempts plan_with_diagnostics(std::string_view query, std::string_view memory_summary,
                                       const ToolRegistry& registry, LmBackend& backend,
                                       const PlannerOptions& options = {});

/// build prompt -> backend -> parse -> validate, with one re-prompt carrying the
/// error diagnostic. Throws Errc::planning_failed after the retry.
Plan plan(std::string_view query, std::string_view memory_summary, const ToolRegistry& registry,
          LmBackend& backend, const PlannerOptions& options = {});

}  // namespace cha
