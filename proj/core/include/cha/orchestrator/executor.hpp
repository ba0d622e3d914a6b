#pragma once

#include <string_view>
#include <vector>

#include "cha/domain/plan.hpp"
#include "cha/domain/trace.hpp"
#include "cha/orchestrator/memory.hpp"
#include "cha/tools/registry.hpp"

namespace cha {

/// Literals pass through, $query/$audio bind to the run's inputs, memory
/// references read the stored value (lists whole).
/// Throws Errc::missing_memory_key.
ValueMap resolve_inputs(const TaskInvocation& invocation, std::string_view query, const AudioRef& audio,
                        const ShortTermMemory& memory);

struct ExecutionLog {
    std::vector<ExecutedStep> steps;
    std::vector<double> latency_ms;
    bool failed = false;

    const ExecutedStep* failed_step() const { return failed && !steps.empty() ? &steps.back() : nullptr; }
};

/// Runs the chosen steps in order, storing every ok output as step<k>.<field>.
/// Halts at the first failing step; errors end up in the log, never thrown.
ExecutionLog execute_plan(const Plan& plan, std::string_view query, const AudioRef& audio,
                          const ToolRegistry& registry, ShortTermMemory& memory);

}  // namespace cha
