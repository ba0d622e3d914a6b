#include "generators.hpp"

#include <algorithm>

#include "cha/planner/planner.hpp"
#include "cha/tools/standard_tools.hpp"

namespace cha::test {

namespace {

struct Produced {
    int step;
    std::string field;
    SemanticType type;
};

bool assignable(SemanticType field, SemanticType param) {
    if (field == param) return true;
    if (param == SemanticType::text) return field == SemanticType::url;
    if (param == SemanticType::url) return field == SemanticType::hits;
    return false;
}

std::string emotion_literal(Rng& rng) {
    static const std::vector<std::string> forms = {"sad", "Happy", "ANGRY", " neutral ", "Sad", "happy\t"};
    return rng.pick(forms);
}

std::string url_literal(Rng& rng) {
    static const std::vector<std::string> hosts = {"example.org", "wellbeing.example.org", "a.example.net"};
    return "https://" + rng.pick(hosts) + "/p/" + std::to_string(rng.below(1000));
}

InputBinding bind_param(Rng& rng, const ParamSpec& param, const std::vector<Produced>& produced) {
    std::vector<InputBinding> options;
    for (const auto& p : produced) {
        if (assignable(p.type, param.type)) options.push_back(InputBinding::memory(p.step, p.field));
    }
    switch (param.type) {
        case SemanticType::audio: options.push_back(InputBinding::audio()); break;
        case SemanticType::text:
            options.push_back(InputBinding::query());
            options.push_back(InputBinding::literal(random_text(rng)));
            break;
        case SemanticType::url: options.push_back(InputBinding::literal(url_literal(rng))); break;
        case SemanticType::emotion: options.push_back(InputBinding::literal(emotion_literal(rng))); break;
        case SemanticType::number: options.push_back(InputBinding::literal(std::to_string(rng.below(100)))); break;
        case SemanticType::hits: break;
    }
    return rng.pick(options);
}

std::string prose(Rng& rng) {
    switch (rng.below(3)) {
        case 0: return "";
        case 1: return "Thinking it over.\n\n";
        default:
            return "STRATEGY 1: search first.\nSTRATEGY 2: detect emotion, then search.\n"
                   "STRATEGY 3: answer directly.\nPROS AND CONS: the second is most targeted.\n"
                   "DECISION: strategy 2.\n\n";
    }
}

std::string plan_json(const std::vector<TaskInvocation>& chosen) {
    const std::string block = render_plan_block(chosen);
    const auto first_nl = block.find('\n');
    return block.substr(first_nl + 1, block.rfind("```") - first_nl - 2);
}

std::string wrap(const std::string& body) { return "```FINAL_PLAN\n" + body + "\n```"; }

void replace_once(std::string& s, const std::string& from, const std::string& to) {
    const auto at = s.find(from);
    if (at != std::string::npos) s.replace(at, from.size(), to);
}

}  // namespace

std::string random_text(Rng& rng) {
    static const std::vector<std::string> pieces = {
        "how", "can", "I", "sleep", "better", "\"quoted\"", "back\\slash", "line\nbreak", "tab\there",
        "caf\xC3\xA9", "\xE2\x9C\x93", "{brace}", "[x]", "50%", "a,b", "$not-first", "  ", "\xF0\x9F\x99\x82"};
    std::string out;
    const std::size_t n = 1 + rng.below(6);
    for (std::size_t i = 0; i < n; ++i) {
        if (i) out += ' ';
        out += rng.pick(pieces);
    }
    if (out.front() == '$') out.insert(out.begin(), 'x');
    return out;
}

std::vector<TaskInvocation> random_valid_plan(Rng& rng, const ToolRegistry& registry) {
    const auto specs = registry.specs();
    std::vector<TaskInvocation> chosen;
    std::vector<Produced> produced;
    const std::size_t steps = 1 + rng.below(6);
    for (std::size_t i = 0; i < steps; ++i) {
        const ToolSpec& spec = *specs[rng.below(specs.size())];
        TaskInvocation inv;
        inv.step = static_cast<int>(i) + 1;
        inv.task_name = spec.name;
        for (const auto& param : spec.inputs) {
            if (!param.required && rng.chance(50)) continue;
            inv.inputs.emplace(param.name, bind_param(rng, param, produced));
        }
        for (const auto& field : spec.outputs) {
            if (field.required) produced.push_back({inv.step, field.name, field.type});
        }
        chosen.push_back(std::move(inv));
    }
    return chosen;
}

std::string random_planner_output(Rng& rng, const std::vector<TaskInvocation>& chosen) {
    std::string out = prose(rng) + render_plan_block(chosen);
    if (rng.chance(30)) out += "\n\nThat is the plan.";
    return out;
}

MalformedCase random_malformed_output(Rng& rng, const std::vector<TaskInvocation>& chosen) {
    const std::string body = plan_json(chosen);
    const int n = static_cast<int>(chosen.size());
    MalformedCase c;
    switch (rng.below(12)) {
        case 0:
            c = {"no_block", prose(rng) + body, {Errc::no_final_plan_block}};
            break;
        case 1:
            c = {"unterminated", "```FINAL_PLAN\n" + body, {Errc::no_final_plan_block}};
            break;
        case 2:
            c = {"wrong_label", "```PLAN\n" + body + "\n```", {Errc::no_final_plan_block}};
            break;
        case 3:
            c = {"not_json", wrap(body.substr(0, body.size() / 2)), {Errc::malformed_step}};
            break;
        case 4:
            c = {"not_array", wrap("{\"step\": 1}"), {Errc::malformed_step}};
            break;
        case 5: {
            auto steps = chosen;
            steps.front().step = n + 1;
            c = {"misnumbered", wrap(plan_json(steps)), {Errc::malformed_step}};
            break;
        }
        case 6: {
            std::string text = body;
            replace_once(text, "\"task\"", "\"tusk\"");
            c = {"missing_task", wrap(text), {Errc::malformed_step}};
            break;
        }
        case 7:
            c = {"empty", wrap(rng.chance(50) ? "[]" : "  [ ]  "), {Errc::empty_plan}};
            break;
        case 8: {
            auto steps = chosen;
            steps[rng.below(steps.size())].task_name = "summon_" + std::to_string(rng.below(100));
            c = {"unknown_task", wrap(plan_json(steps)), {Errc::unknown_task}};
            break;
        }
        case 9: {
            // Forward or self reference.
            auto steps = chosen;
            auto& victim = steps[rng.below(steps.size())];
            const int target = victim.step + static_cast<int>(rng.below(3));
            const std::string name = victim.inputs.empty() ? "audio" : victim.inputs.begin()->first;
            victim.inputs[name] = InputBinding{InputBinding::Kind::memory_ref,
                                               "$step" + std::to_string(target) + ".emotion"};
            c = {"bad_reference", wrap(plan_json(steps)), {Errc::bad_reference}};
            break;
        }
        case 10: {
            auto steps = chosen;
            steps.front().inputs["nonexistent_param"] = InputBinding::literal("x");
            c = {"unknown_param", wrap(plan_json(steps)), {Errc::type_mismatch}};
            break;
        }
        default: {
            // Every standard tool has a required input; dropping it or binding it
            // to the wrong kind of value is a type error.
            auto steps = chosen;
            auto& inv = steps.front();
            const bool takes_audio = inv.task_name == tools::kSpeechToText ||
                                     inv.task_name == tools::kEmotionRecognition;
            if (rng.chance(50)) {
                if (takes_audio) {
                    inv.inputs.erase("audio");
                } else if (inv.task_name == tools::kWebSearch) {
                    inv.inputs.erase("query");
                } else if (inv.task_name == tools::kExtractText) {
                    inv.inputs.erase("url");
                } else {
                    inv.inputs.erase("text");
                }
            } else if (takes_audio) {
                inv.inputs["audio"] = InputBinding::query();
            } else if (inv.task_name == tools::kWebSearch) {
                inv.inputs["emotion"] = InputBinding::literal("joyful");
            } else {
                inv.inputs.begin()->second = InputBinding::audio();
            }
            c = {"type_mismatch", wrap(plan_json(steps)), {Errc::type_mismatch}};
            break;
        }
    }
    return c;
}

TraceRecord random_trace(Rng& rng) {
    static const std::vector<std::string> tasks = {
        std::string(tools::kSpeechToText), std::string(tools::kEmotionRecognition), std::string(tools::kWebSearch),
        std::string(tools::kWebSearch),    std::string(tools::kExtractText),        std::string(tools::kTextToSpeech)};
    static const std::vector<std::string> emotion_values = {"sad", "Angry", "happy ", "neutral", "joyful", "",
                                                            "$query", "$step1.emotion", "$step2.emotion",
                                                            "$step3.emotion", "$step1.confidence", "$step9.emotion"};
    TraceRecord t;
    t.trace_id = "gen-" + std::to_string(rng.below(1000000));
    t.session_id = "s";
    t.query_text = "q";
    const std::size_t steps = rng.below(6);
    // Half the traces open with emotion recognition, as real plans usually do.
    const bool emotion_first = rng.chance(50);
    for (std::size_t i = 0; i < steps; ++i) {
        ExecutedStep s;
        s.invocation.step = static_cast<int>(i) + 1;
        s.invocation.task_name = i == 0 && emotion_first ? std::string(tools::kEmotionRecognition) : rng.pick(tasks);
        s.status = rng.chance(80) ? StepStatus::ok : StepStatus::error;
        if (s.invocation.task_name == tools::kWebSearch) {
            s.invocation.inputs.emplace("query", InputBinding::query());
            s.concrete_inputs.emplace("query", std::string("q"));
            if (rng.chance(60)) {
                const std::string raw = rng.pick(emotion_values);
                const auto binding = parse_binding(raw);
                s.invocation.inputs.emplace("emotion", binding ? *binding : InputBinding::literal(raw));
                // Resolution may have failed, leaving the concrete inputs without it.
                if (rng.chance(85)) s.concrete_inputs.emplace("emotion", EmotionLabel::sad);
            }
        } else if (s.invocation.task_name == tools::kEmotionRecognition) {
            s.invocation.inputs.emplace("audio", InputBinding::audio());
        }
        if (s.status == StepStatus::error) {
            s.error_code = "backend_error";
            if (rng.chance(50)) s.concrete_inputs.clear();
        }
        t.executed.push_back(std::move(s));
        if (t.executed.back().status == StepStatus::error && rng.chance(70)) break;
    }
    if (rng.chance(60)) t.response_prompt_emotion = kAllEmotions[rng.below(4)];
    switch (rng.below(5)) {
        case 0: t.outcome = {OutcomeKind::failed, "execution"}; break;
        case 1: t.outcome = {OutcomeKind::completed_text_only, "tts"}; break;
        default: t.outcome = {OutcomeKind::completed, ""}; break;
    }
    return t;
}

}  // namespace cha::test
