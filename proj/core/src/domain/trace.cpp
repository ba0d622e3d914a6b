#include "cha/domain/trace.hpp"

#include "cha/util/digest.hpp"
#include "json_codec.hpp"

namespace cha {

using detail::get_field;
using detail::ojson;
using json = nlohmann::json;

namespace {

std::string dump(const ojson& j) { return j.dump(-1, ' ', false, json::error_handler_t::replace); }

ojson optional_emotion(const std::optional<EmotionLabel>& e) {
    return e ? ojson(std::string(to_string(*e))) : ojson(nullptr);
}

std::optional<EmotionLabel> read_optional_emotion(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return parse_emotion(get_field<std::string>(j, key, "trace"));
}

OutcomeKind parse_outcome_kind(const std::string& s) {
    if (s == "completed") return OutcomeKind::completed;
    if (s == "completed_text_only") return OutcomeKind::completed_text_only;
    if (s == "failed") return OutcomeKind::failed;
    throw Error(Errc::parse_error, "outcome " + s);
}

ojson values_to_json(const ValueMap& values) {
    ojson out = ojson::object();
    for (const auto& [k, v] : values) out[k] = detail::value_to_tagged(v);
    return out;
}

ValueMap values_from_json(const json& j) {
    if (!j.is_object()) throw Error(Errc::parse_error, "value map");
    ValueMap out;
    for (const auto& [k, v] : j.items()) out.emplace(k, detail::value_from_tagged(v));
    return out;
}

ojson trace_to_json(const TraceRecord& t) {
    ojson plan = ojson::object();
    plan["strategies_considered"] = t.plan.strategies_considered;
    plan["pros_cons"] = t.plan.pros_cons;
    ojson chosen = ojson::array();
    for (const auto& inv : t.plan.chosen) chosen.push_back(detail::invocation_to_json(inv));
    plan["chosen"] = std::move(chosen);
    plan["raw_planner_output"] = t.plan.raw_planner_output;
    plan["degraded_parse"] = t.plan.degraded_parse;
    plan["retry_count"] = t.plan.retry_count;

    ojson executed = ojson::array();
    for (const auto& s : t.executed) {
        ojson step = ojson::object();
        step["invocation"] = detail::invocation_to_json(s.invocation);
        step["status"] = std::string(to_string(s.status));
        step["error_code"] = s.error_code;
        step["error_message"] = s.error_message;
        step["concrete_inputs"] = values_to_json(s.concrete_inputs);
        step["inputs_digest"] = s.inputs_digest;
        step["output_digest"] = s.output_digest;
        executed.push_back(std::move(step));
    }

    ojson memory = ojson::array();
    for (const auto& m : t.memory) {
        memory.push_back(ojson{{"key", m.key},
                               {"producer_task", m.producer_task},
                               {"byte_size", m.byte_size},
                               {"value", detail::value_to_tagged(m.value)}});
    }

    ojson out = ojson::object();
    out["trace_id"] = t.trace_id;
    out["session_id"] = t.session_id;
    out["query_text"] = t.query_text;
    out["query_emotion_ground_truth"] = optional_emotion(t.query_emotion_ground_truth);
    out["user_audio_ref"] = t.user_audio_ref;
    out["plan"] = std::move(plan);
    out["executed"] = std::move(executed);
    out["memory"] = std::move(memory);
    out["detected_emotion"] = optional_emotion(t.detected_emotion);
    out["search_performed"] = t.search_performed;
    out["search_inputs_digest"] = t.search_inputs_digest;
    out["response_prompt_emotion"] = optional_emotion(t.response_prompt_emotion);
    out["response_text"] = t.response_text;
    out["response_audio_ref"] = t.response_audio_ref ? ojson(*t.response_audio_ref) : ojson(nullptr);
    out["outcome"] = ojson{{"kind", std::string(to_string(t.outcome.kind))}, {"reason", t.outcome.reason}};
    return out;
}

TraceRecord trace_from_json(const json& j) {
    const std::string ctx = "trace";
    TraceRecord t;
    t.trace_id = get_field<std::string>(j, "trace_id", ctx);
    t.session_id = get_field<std::string>(j, "session_id", ctx);
    t.query_text = get_field<std::string>(j, "query_text", ctx);
    t.query_emotion_ground_truth = read_optional_emotion(j, "query_emotion_ground_truth");
    t.user_audio_ref = get_field<std::string>(j, "user_audio_ref", ctx);

    const auto plan = get_field<json>(j, "plan", ctx);
    t.plan.strategies_considered = get_field<std::vector<std::string>>(plan, "strategies_considered", "plan");
    t.plan.pros_cons = get_field<std::string>(plan, "pros_cons", "plan");
    for (const auto& inv : get_field<json>(plan, "chosen", "plan")) {
        t.plan.chosen.push_back(detail::invocation_from_json(inv));
    }
    t.plan.raw_planner_output = get_field<std::string>(plan, "raw_planner_output", "plan");
    t.plan.degraded_parse = get_field<bool>(plan, "degraded_parse", "plan");
    t.plan.retry_count = get_field<int>(plan, "retry_count", "plan");

    for (const auto& s : get_field<json>(j, "executed", ctx)) {
        ExecutedStep step;
        step.invocation = detail::invocation_from_json(get_field<json>(s, "invocation", "step"));
        const auto status = get_field<std::string>(s, "status", "step");
        if (status != "ok" && status != "error") throw Error(Errc::parse_error, "step status " + status);
        step.status = status == "ok" ? StepStatus::ok : StepStatus::error;
        step.error_code = get_field<std::string>(s, "error_code", "step");
        step.error_message = get_field<std::string>(s, "error_message", "step");
        step.concrete_inputs = values_from_json(get_field<json>(s, "concrete_inputs", "step"));
        step.inputs_digest = get_field<std::string>(s, "inputs_digest", "step");
        step.output_digest = get_field<std::string>(s, "output_digest", "step");
        t.executed.push_back(std::move(step));
    }

    for (const auto& m : get_field<json>(j, "memory", ctx)) {
        MemoryRecord rec;
        rec.key = get_field<std::string>(m, "key", "memory");
        rec.producer_task = get_field<std::string>(m, "producer_task", "memory");
        rec.byte_size = get_field<std::size_t>(m, "byte_size", "memory");
        rec.value = detail::value_from_tagged(get_field<json>(m, "value", "memory"));
        t.memory.push_back(std::move(rec));
    }

    t.detected_emotion = read_optional_emotion(j, "detected_emotion");
    t.search_performed = get_field<bool>(j, "search_performed", ctx);
    t.search_inputs_digest = get_field<std::string>(j, "search_inputs_digest", ctx);
    t.response_prompt_emotion = read_optional_emotion(j, "response_prompt_emotion");
    t.response_text = get_field<std::string>(j, "response_text", ctx);
    if (j.contains("response_audio_ref") && !j.at("response_audio_ref").is_null()) {
        t.response_audio_ref = get_field<std::string>(j, "response_audio_ref", ctx);
    }
    const auto outcome = get_field<json>(j, "outcome", ctx);
    t.outcome.kind = parse_outcome_kind(get_field<std::string>(outcome, "kind", "outcome"));
    t.outcome.reason = get_field<std::string>(outcome, "reason", "outcome");
    return t;
}

json parse_or_throw(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(Errc::parse_error, e.what());
    }
}

}  // namespace

std::string_view to_string(OutcomeKind kind) {
    switch (kind) {
        case OutcomeKind::completed: return "completed";
        case OutcomeKind::completed_text_only: return "completed_text_only";
        case OutcomeKind::failed: return "failed";
    }
    return "failed";
}

std::string_view to_string(StepStatus status) { return status == StepStatus::ok ? "ok" : "error"; }

std::string canonical_trace_json(const TraceRecord& trace) { return dump(trace_to_json(trace)); }

TraceRecord parse_trace_json(std::string_view text) { return trace_from_json(parse_or_throw(text)); }

std::string trace_log_line(const TraceRecord& trace, const TraceMeta& meta) {
    ojson m = ojson::object();
    m["recorded_at_ms"] = meta.recorded_at_ms;
    m["step_latency_ms"] = meta.step_latency_ms;
    m["total_latency_ms"] = meta.total_latency_ms;
    return "{\"trace\":" + canonical_trace_json(trace) + ",\"meta\":" + dump(m) + "}";
}

TraceLogEntry parse_trace_log_line(std::string_view line) {
    const json j = parse_or_throw(line);
    TraceLogEntry entry;
    entry.trace = trace_from_json(get_field<json>(j, "trace", "log line"));
    if (j.contains("meta") && j.at("meta").is_object()) {
        const auto& m = j.at("meta");
        entry.meta.recorded_at_ms = m.value("recorded_at_ms", std::int64_t{0});
        entry.meta.step_latency_ms = m.value("step_latency_ms", std::vector<double>{});
        entry.meta.total_latency_ms = m.value("total_latency_ms", 0.0);
    }
    return entry;
}

std::string canonical_part_of_log_line(std::string_view line) {
    constexpr std::string_view prefix = "{\"trace\":";
    const auto meta = line.rfind(",\"meta\":");
    if (line.substr(0, prefix.size()) != prefix || meta == std::string_view::npos) {
        throw Error(Errc::parse_error, "not a trace log line");
    }
    return std::string(line.substr(prefix.size(), meta - prefix.size()));
}

std::string canonical_values_json(const ValueMap& values) { return dump(values_to_json(values)); }

std::string digest_values(const ValueMap& values) { return sha256_hex(canonical_values_json(values)); }

}  // namespace cha
