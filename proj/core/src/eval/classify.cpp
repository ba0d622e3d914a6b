#include "cha/eval/classify.hpp"

#include <map>

#include "cha/error.hpp"
#include "cha/tools/standard_tools.hpp"

namespace cha::eval {

std::string_view to_string(PathClass path) {
    switch (path) {
        case PathClass::emotion_forwarded: return "PATH_EMOTION_FORWARDED";
        case PathClass::emotion_search: return "PATH_EMOTION_SEARCH";
        case PathClass::invalid: return "INVALID";
    }
    return "INVALID";
}

PathClass parse_path_class(std::string_view text) {
    for (PathClass p : {PathClass::emotion_forwarded, PathClass::emotion_search, PathClass::invalid}) {
        if (text == to_string(p)) return p;
    }
    throw Error(Errc::parse_error, "path class '" + std::string(text) + "'");
}

std::string_view to_string(Metric2Base base) {
    return base == Metric2Base::all_trials ? "all_trials" : "valid_trials";
}

Metric2Base parse_metric2_base(std::string_view text) {
    if (text == "all_trials") return Metric2Base::all_trials;
    if (text == "valid_trials") return Metric2Base::valid_trials;
    throw Error(Errc::parse_error, "metric2 base '" + std::string(text) + "'");
}

namespace {

bool binds_emotion(const ExecutedStep& search, const std::map<int, const ExecutedStep*>& ok_emotion_steps) {
    auto it = search.invocation.inputs.find("emotion");
    if (it == search.invocation.inputs.end()) return false;
    if (!search.concrete_inputs.count("emotion")) return false;
    const InputBinding& binding = it->second;
    switch (binding.kind) {
        case InputBinding::Kind::literal: return try_parse_emotion(binding.value).has_value();
        case InputBinding::Kind::memory_ref: {
            const auto path = parse_memory_path(binding.value);
            return path && path->field == "emotion" && ok_emotion_steps.count(path->step) > 0;
        }
        default: return false;
    }
}

}  // namespace

PathClass classify_trace(const TraceRecord& trace) {
    if (!trace.outcome.finished()) return PathClass::invalid;

    std::map<int, const ExecutedStep*> ok_emotion_steps;
    for (const auto& step : trace.executed) {
        if (step.status == StepStatus::ok && step.invocation.task_name == tools::kEmotionRecognition) {
            ok_emotion_steps.emplace(step.invocation.step, &step);
        }
    }
    bool searched = false;
    bool searched_with_emotion = false;
    for (const auto& step : trace.executed) {
        if (step.status != StepStatus::ok || step.invocation.task_name != tools::kWebSearch) continue;
        searched = true;
        if (binds_emotion(step, ok_emotion_steps)) searched_with_emotion = true;
    }
    if (ok_emotion_steps.empty() || !searched) return PathClass::invalid;
    if (searched_with_emotion) return PathClass::emotion_search;
    if (trace.response_prompt_emotion) return PathClass::emotion_forwarded;
    return PathClass::invalid;
}

long long ratio_hundredths(std::size_t count, std::size_t denominator) {
    if (denominator == 0) return 0;
    const auto c = static_cast<long long>(count);
    const auto d = static_cast<long long>(denominator);
    return (2 * c * 100 + d) / (2 * d);
}

PlannerMetrics compute_planner_metrics(const std::vector<PathClass>& classes, Metric2Base base) {
    if (classes.empty()) throw Error(Errc::empty_trace_set, "no traces");
    PlannerMetrics m;
    m.n = classes.size();
    m.metric2_base = base;
    for (PathClass c : classes) {
        switch (c) {
            case PathClass::emotion_forwarded: ++m.forwarded; break;
            case PathClass::emotion_search: ++m.search; break;
            case PathClass::invalid: ++m.invalid; break;
        }
    }
    const std::size_t valid = m.forwarded + m.search;
    m.metric1_hundredths = ratio_hundredths(valid, m.n);
    m.metric2_hundredths = ratio_hundredths(m.search, base == Metric2Base::all_trials ? m.n : valid);
    return m;
}

}  // namespace cha::eval
