#include <charconv>
#include <unordered_set>

#include "cha/error.hpp"
#include "cha/planner/planner.hpp"
#include "cha/util/text.hpp"

namespace cha {

namespace {

std::string where(int step, std::string_view what) {
    return "step " + std::to_string(step) + ": " + std::string(what);
}

/// Which producer field types may feed a parameter type.
bool assignable(SemanticType field, SemanticType param) {
    if (field == param) return true;
    if (param == SemanticType::text) return field == SemanticType::url;
    if (param == SemanticType::url) return field == SemanticType::hits;
    return false;
}

bool literal_fits(SemanticType param, std::string_view literal) {
    switch (param) {
        case SemanticType::text: return true;
        case SemanticType::url: return !trim(literal).empty();
        case SemanticType::emotion: return try_parse_emotion(literal).has_value();
        case SemanticType::number: {
            double v = 0;
            const std::string_view t = trim(literal);
            auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
            return !t.empty() && ec == std::errc{} && end == t.data() + t.size();
        }
        case SemanticType::audio:
        case SemanticType::hits: return false;
    }
    return false;
}

}  // namespace

Plan validate_plan(Plan plan, const ToolRegistry& registry) {
    if (plan.chosen.empty()) throw Error(Errc::empty_plan, "plan has no steps");

    std::vector<const ToolSpec*> step_tools;
    for (std::size_t i = 0; i < plan.chosen.size(); ++i) {
        const TaskInvocation& inv = plan.chosen[i];
        if (inv.step != static_cast<int>(i) + 1) throw Error(Errc::malformed_step, where(inv.step, "out of order"));
        const ToolSpec* spec = registry.find(inv.task_name);
        if (spec == nullptr) throw Error(Errc::unknown_task, inv.task_name);

        for (const auto& [param_name, binding] : inv.inputs) {
            const ParamSpec* param = spec->find_input(param_name);
            if (param == nullptr) throw Error(Errc::type_mismatch, where(inv.step, param_name + " is not a parameter"));

            switch (binding.kind) {
                case InputBinding::Kind::literal:
                    if (!literal_fits(param->type, binding.value)) {
                        throw Error(Errc::type_mismatch, where(inv.step, param_name));
                    }
                    break;
                case InputBinding::Kind::query_ref:
                    if (param->type != SemanticType::text) throw Error(Errc::type_mismatch, where(inv.step, param_name));
                    break;
                case InputBinding::Kind::audio_ref:
                    if (param->type != SemanticType::audio) throw Error(Errc::type_mismatch, where(inv.step, param_name));
                    break;
                case InputBinding::Kind::memory_ref: {
                    const auto path = parse_memory_path(binding.value);
                    if (!path || path->step < 1 || path->step >= inv.step) {
                        throw Error(Errc::bad_reference, where(inv.step, binding.value));
                    }
                    const ToolSpec* producer = step_tools[static_cast<std::size_t>(path->step - 1)];
                    const FieldSpec* field = producer->find_output(path->field);
                    // Optional outputs may be absent even after a successful step.
                    if (field == nullptr || !field->required) {
                        throw Error(Errc::bad_reference, where(inv.step, binding.value));
                    }
                    if (!assignable(field->type, param->type)) {
                        throw Error(Errc::type_mismatch, where(inv.step, param_name));
                    }
                    break;
                }
            }
        }
        for (const auto& param : spec->inputs) {
            if (param.required && !inv.inputs.contains(param.name)) {
                throw Error(Errc::type_mismatch, where(inv.step, param.name + " is required"));
            }
        }
        step_tools.push_back(spec);
    }
    return plan;
}

}  // namespace cha
