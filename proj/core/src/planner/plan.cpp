#include "cha/error.hpp"
#include "cha/planner/planner.hpp"

namespace cha {

namespace {

std::string retry_prompt(std::string_view original, std::string_view diagnostic) {
    std::string text(original);
    text += "\nYOUR PREVIOUS ANSWER WAS REJECTED: ";
    text += diagnostic;
    text += "\nAnswer again and end with a valid FINAL_PLAN block.\n";
    return text;
}

}  // namespace

PlanningAttempts plan_with_diagnostics(std::string_view query, std::string_view memory_summary,
                                       const ToolRegistry& registry, LmBackend& backend,
                                       const PlannerOptions& options) {
    LmRequest request = build_planner_prompt(query, memory_summary, tool_descriptions(registry));
    request.temperature = options.temperature;
    request.max_output_tokens = options.max_output_tokens;

    PlanningAttempts attempts;
    const std::string original = request.user_text;
    for (int attempt = 0; attempt < 2; ++attempt) {
        if (attempt > 0) request.user_text = retry_prompt(original, attempts.last_error);
        try {
            attempts.raw_outputs.push_back(backend.complete(request));
        } catch (const Error& e) {
            // Transport failures are not the model's fault; they are not retried here.
            attempts.last_error = e.what();
            return attempts;
        }
        try {
            Plan plan = validate_plan(parse_plan(attempts.raw_outputs.back()), registry);
            plan.retry_count = attempt;
            attempts.plan = std::move(plan);
            return attempts;
        } catch (const Error& e) {
            attempts.last_error = e.what();
        }
    }
    return attempts;
}

Plan plan(std::string_view query, std::string_view memory_summary, const ToolRegistry& registry,
          LmBackend& backend, const PlannerOptions& options) {
    auto attempts = plan_with_diagnostics(query, memory_summary, registry, backend, options);
    if (!attempts.plan) throw Error(Errc::planning_failed, attempts.last_error);
    return std::move(*attempts.plan);
}

}  // namespace cha
