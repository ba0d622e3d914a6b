#include "cha/orchestrator/executor.hpp"

#include <chrono>

#include "cha/error.hpp"

namespace cha {

ValueMap resolve_inputs(const TaskInvocation& invocation, std::string_view query, const AudioRef& audio,
                        const ShortTermMemory& memory) {
    ValueMap out;
    for (const auto& [name, binding] : invocation.inputs) {
        switch (binding.kind) {
            case InputBinding::Kind::literal: out.emplace(name, binding.value); break;
            case InputBinding::Kind::query_ref: out.emplace(name, std::string(query)); break;
            case InputBinding::Kind::audio_ref: out.emplace(name, audio); break;
            case InputBinding::Kind::memory_ref: {
                const auto path = parse_memory_path(binding.value);
                if (!path) throw Error(Errc::missing_memory_key, binding.value);
                out.emplace(name, memory.at(path->key()));
                break;
            }
        }
    }
    return out;
}

ExecutionLog execute_plan(const Plan& plan, std::string_view query, const AudioRef& audio,
                          const ToolRegistry& registry, ShortTermMemory& memory) {
    ExecutionLog log;
    for (const TaskInvocation& invocation : plan.chosen) {
        ExecutedStep step;
        step.invocation = invocation;
        const auto started = std::chrono::steady_clock::now();
        try {
            step.concrete_inputs = resolve_inputs(invocation, query, audio, memory);
            step.inputs_digest = digest_values(step.concrete_inputs);
            TaskResult result = invoke_tool(registry, invocation.task_name, step.concrete_inputs);
            step.output_digest = digest_values(result.outputs);
            for (auto& [field, value] : result.outputs) {
                memory.insert("step" + std::to_string(invocation.step) + "." + field, std::move(value),
                              invocation.task_name);
            }
        } catch (const Error& e) {
            step.status = StepStatus::error;
            step.error_code = std::string(to_string(e.code()));
            step.error_message = e.what();
            step.output_digest.clear();
            log.failed = true;
        }
        log.latency_ms.push_back(
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count());
        log.steps.push_back(std::move(step));
        if (log.failed) break;
    }
    return log;
}

}  // namespace cha
