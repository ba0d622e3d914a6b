#include "cha/orchestrator/pipeline.hpp"

#include <chrono>

#include "cha/error.hpp"
#include "cha/orchestrator/executor.hpp"
#include "cha/tools/standard_tools.hpp"
#include "cha/util/text.hpp"

namespace cha {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void fail(TraceRecord& trace, std::string reason) {
    trace.outcome = Outcome{OutcomeKind::failed, std::move(reason)};
}

void summarize_execution(TraceRecord& trace) {
    for (const auto& step : trace.executed) {
        if (step.status != StepStatus::ok) continue;
        if (step.invocation.task_name == tools::kWebSearch && !trace.search_performed) {
            trace.search_performed = true;
            trace.search_inputs_digest = step.inputs_digest;
        }
    }
    for (const auto& record : trace.memory) {
        if (record.producer_task != tools::kEmotionRecognition) continue;
        if (const auto* label = std::get_if<EmotionLabel>(&record.value)) {
            trace.detected_emotion = *label;
            break;
        }
    }
}

}  // namespace

Pipeline::Pipeline(const ToolRegistry& registry, LmBackend& planner_lm, LmBackend& responder_lm, TraceSink* sink,
                   PipelineConfig config)
    : registry_(registry), planner_lm_(planner_lm), responder_lm_(responder_lm), sink_(sink), config_(config) {}

AgentReply Pipeline::run(const RunRequest& request) const {
    const auto started = Clock::now();
    AgentReply reply;
    TraceRecord& trace = reply.trace;
    trace.trace_id = request.trace_id;
    trace.session_id = request.session_id;
    trace.query_emotion_ground_truth = request.ground_truth;
    trace.user_audio_ref = request.user_audio.digest;

    [&] {
        try {
            const auto stt = invoke_tool(registry_, tools::kSpeechToText, {{"audio", request.user_audio}});
            trace.query_text = std::string(trim(std::get<std::string>(stt.outputs.at("transcript"))));
        } catch (const Error&) {
            return fail(trace, "stt");
        }
        if (trace.query_text.empty()) return fail(trace, "stt");

        ShortTermMemory memory;
        auto attempts = plan_with_diagnostics(trace.query_text, memory.summary(), registry_, planner_lm_,
                                              config_.planner);
        if (!attempts.plan) {
            trace.plan.raw_planner_output = attempts.raw_outputs.empty() ? attempts.last_error
                                                                         : attempts.raw_outputs.back();
            trace.plan.retry_count = static_cast<int>(attempts.raw_outputs.size()) - 1;
            return fail(trace, "planning");
        }
        trace.plan = std::move(*attempts.plan);

        ExecutionLog log = execute_plan(trace.plan, trace.query_text, request.user_audio, registry_, memory);
        trace.executed = std::move(log.steps);
        reply.meta.step_latency_ms = std::move(log.latency_ms);
        trace.memory = memory.to_records();
        summarize_execution(trace);
        if (log.failed) return fail(trace, "execution");

        const LmRequest prompt = build_response_prompt(trace.query_text, memory, config_.response_char_budget);
        trace.response_prompt_emotion = memory.first_emotion();
        try {
            trace.response_text = generate_response(prompt, responder_lm_);
        } catch (const Error&) {
            return fail(trace, "response");
        }
        reply.response_text = trace.response_text;

        try {
            const auto tts = invoke_tool(registry_, tools::kTextToSpeech, {{"text", trace.response_text}});
            const auto& audio = std::get<AudioRef>(tts.outputs.at("audio"));
            reply.response_audio = audio;
            trace.response_audio_ref = audio.digest;
            trace.outcome = Outcome{OutcomeKind::completed, ""};
        } catch (const Error&) {
            trace.outcome = Outcome{OutcomeKind::completed_text_only, "tts"};
        }
    }();

    reply.meta.total_latency_ms = ms_since(started);
    reply.meta.recorded_at_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                    std::chrono::system_clock::now().time_since_epoch())
                                    .count();
    if (sink_ != nullptr) sink_->append(trace, reply.meta);
    return reply;
}

}  // namespace cha
