#pragma once

#include <optional>
#include <string>

#include "cha/domain/trace.hpp"
#include "cha/orchestrator/response.hpp"
#include "cha/planner/planner.hpp"
#include "cha/tools/registry.hpp"

namespace cha {

/// Receives every finished run's trace exactly once. Implementations must
/// tolerate concurrent calls.
class TraceSink {
public:
    virtual ~TraceSink() = default;
    virtual void append(const TraceRecord& trace, const TraceMeta& meta) = 0;
};

struct PipelineConfig {
    PlannerOptions planner;
    std::size_t response_char_budget = kDefaultResponseCharBudget;
};

struct RunRequest {
    std::string session_id;
    std::string trace_id;
    AudioRef user_audio;  // canonical clip
    std::optional<EmotionLabel> ground_truth;
};

struct AgentReply {
    std::string response_text;
    std::optional<AudioRef> response_audio;
    TraceRecord trace;
    TraceMeta meta;
};

/// Voice in, voice out: transcribe, plan, execute, respond, synthesize, then
/// persist the trace. Never throws for tool, planner or responder failures;
/// those end up in the trace outcome.
class Pipeline {
public:
    Pipeline(const ToolRegistry& registry, LmBackend& planner_lm, LmBackend& responder_lm, TraceSink* sink,
             PipelineConfig config = {});

    AgentReply run(const RunRequest& request) const;

private:
    const ToolRegistry& registry_;
    LmBackend& planner_lm_;
    LmBackend& responder_lm_;
    TraceSink* sink_;
    PipelineConfig config_;
};

}  // namespace cha
