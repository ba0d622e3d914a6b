#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cha/domain/emotion.hpp"
#include "cha/domain/plan.hpp"
#include "cha/domain/value.hpp"

namespace cha {

enum class StepStatus { ok, error };

struct ExecutedStep {
    TaskInvocation invocation;
    StepStatus status = StepStatus::ok;
    std::string error_code;
    std::string error_message;
    ValueMap concrete_inputs;  // empty when input resolution itself failed
    std::string inputs_digest;
    std::string output_digest;  // empty on error

    friend bool operator==(const ExecutedStep&, const ExecutedStep&) = default;
};

struct MemoryRecord {
    std::string key;
    std::string producer_task;
    std::size_t byte_size = 0;
    Value value;

    friend bool operator==(const MemoryRecord&, const MemoryRecord&) = default;
};

enum class OutcomeKind { completed, completed_text_only, failed };

struct Outcome {
    OutcomeKind kind = OutcomeKind::completed;
    std::string reason;  // failed / completed_text_only only: "stt", "planning", "execution", "response", "tts"

    bool finished() const { return kind != OutcomeKind::failed; }
    friend bool operator==(const Outcome&, const Outcome&) = default;
};

std::string_view to_string(OutcomeKind kind);
std::string_view to_string(StepStatus status);

/// Everything one pipeline run decided and produced. Serialized canonically
/// (fixed field order, no timestamps) so identical runs give identical bytes.
struct TraceRecord {
    std::string trace_id;
    std::string session_id;
    std::string query_text;
    std::optional<EmotionLabel> query_emotion_ground_truth;
    std::string user_audio_ref;
    Plan plan;
    std::vector<ExecutedStep> executed;
    std::vector<MemoryRecord> memory;
    std::optional<EmotionLabel> detected_emotion;
    bool search_performed = false;
    std::string search_inputs_digest;
    std::optional<EmotionLabel> response_prompt_emotion;  // the EMOTION line given to the responder
    std::string response_text;
    std::optional<std::string> response_audio_ref;
    Outcome outcome;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

/// Non-deterministic facts about a run, kept beside the canonical record.
struct TraceMeta {
    std::int64_t recorded_at_ms = 0;
    std::vector<double> step_latency_ms;
    double total_latency_ms = 0.0;
};

std::string canonical_trace_json(const TraceRecord& trace);
TraceRecord parse_trace_json(std::string_view text);

/// One line of the trace log: {"trace": <canonical>, "meta": {...}} without newline.
std::string trace_log_line(const TraceRecord& trace, const TraceMeta& meta);

struct TraceLogEntry {
    TraceRecord trace;
    TraceMeta meta;
};
TraceLogEntry parse_trace_log_line(std::string_view line);

/// The canonical part of a log line, byte for byte as stored.
std::string canonical_part_of_log_line(std::string_view line);

/// Canonical JSON for a value map; audio is represented by its digest.
std::string canonical_values_json(const ValueMap& values);
std::string digest_values(const ValueMap& values);

}  // namespace cha
