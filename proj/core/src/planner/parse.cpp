#include <cmath>

#include "cha/error.hpp"
#include "cha/planner/planner.hpp"
#include "cha/util/text.hpp"
#include "json_codec.hpp"

namespace cha {

using json = nlohmann::json;

namespace {

[[noreturn]] void malformed(std::size_t step, const std::string& reason) {
    throw Error(Errc::malformed_step, (step == 0 ? std::string("block") : "step " + std::to_string(step)) + ": " + reason);
}

struct Block {
    std::size_t fence_start = 0;  // offset of the opening ```
    std::string_view body;
};

Block find_last_block(std::string_view text) {
    std::optional<std::size_t> open;
    std::size_t label_end = 0;
    for (std::size_t pos = text.find("```"); pos != std::string_view::npos; pos = text.find("```", pos + 3)) {
        std::size_t p = pos + 3;
        while (p < text.size() && (text[p] == ' ' || text[p] == '\t')) ++p;
        if (text.substr(p, kFinalPlanLabel.size()) == kFinalPlanLabel) {
            open = pos;
            label_end = p + kFinalPlanLabel.size();
        }
    }
    if (!open) throw Error(Errc::no_final_plan_block, "no FINAL_PLAN block in planner output");
    const auto close = text.find("```", label_end);
    if (close == std::string_view::npos) throw Error(Errc::no_final_plan_block, "unterminated FINAL_PLAN block");
    return Block{*open, text.substr(label_end, close - label_end)};
}

/// Offset of a heading such as "STRATEGY 2" at the start of a line (ignoring
/// markdown decoration), searching from `from`.
std::optional<std::size_t> find_heading(std::string_view text, std::string_view heading, std::size_t from) {
    const std::string lower = to_lower(text);
    const std::string needle = to_lower(heading);
    for (std::size_t pos = lower.find(needle, from); pos != std::string::npos; pos = lower.find(needle, pos + 1)) {
        std::size_t line = pos;
        while (line > 0 && text[line - 1] != '\n') --line;
        bool decoration_only = true;
        for (std::size_t i = line; i < pos; ++i) {
            const char c = text[i];
            if (c != ' ' && c != '\t' && c != '#' && c != '*' && c != '-' && c != '_') decoration_only = false;
        }
        if (decoration_only) return pos;
    }
    return std::nullopt;
}

std::string section_text(std::string_view text, std::size_t start, std::size_t heading_len, std::size_t end) {
    std::string_view body = text.substr(start + heading_len, end - start - heading_len);
    while (!body.empty() && (body.front() == ':' || body.front() == '*' || body.front() == '#')) body.remove_prefix(1);
    return std::string(trim(body));
}

void capture_deliberation(std::string_view prose, Plan& plan) {
    static constexpr std::string_view kStrategy[] = {"STRATEGY 1", "STRATEGY 2", "STRATEGY 3"};
    static constexpr std::string_view kPros = "PROS AND CONS";
    static constexpr std::string_view kDecision = "DECISION";

    std::vector<std::optional<std::size_t>> starts;
    std::size_t from = 0;
    for (auto heading : kStrategy) {
        auto at = find_heading(prose, heading, from);
        starts.push_back(at);
        if (at) from = *at + heading.size();
    }
    const auto pros = find_heading(prose, kPros, from);
    const auto decision = find_heading(prose, kDecision, pros ? *pros + kPros.size() : from);

    for (std::size_t i = 0; i < starts.size(); ++i) {
        if (!starts[i]) continue;
        std::size_t end = prose.size();
        if (i + 1 < starts.size() && starts[i + 1]) {
            end = *starts[i + 1];
        } else if (pros) {
            end = *pros;
        } else if (decision) {
            end = *decision;
        }
        plan.strategies_considered.push_back(section_text(prose, *starts[i], kStrategy[i].size(), end));
    }
    if (pros) {
        const std::size_t end = decision && *decision > *pros ? *decision : prose.size();
        plan.pros_cons = section_text(prose, *pros, kPros.size(), end);
    }
    const bool complete = plan.strategies_considered.size() == 3 && pros.has_value();
    plan.degraded_parse = !complete;
}

TaskInvocation parse_step(const json& item, std::size_t index) {
    if (!item.is_object()) malformed(index, "not an object");
    if (!item.contains("step") || !item.at("step").is_number_integer()) malformed(index, "missing integer 'step'");
    const auto step = item.at("step").get<long long>();
    if (step != static_cast<long long>(index)) malformed(index, "step numbered " + std::to_string(step));
    if (!item.contains("task") || !item.at("task").is_string()) malformed(index, "missing 'task'");
    TaskInvocation inv;
    inv.step = static_cast<int>(index);
    inv.task_name = item.at("task").get<std::string>();
    if (!is_identifier(inv.task_name)) malformed(index, "task name '" + inv.task_name + "'");
    if (!item.contains("inputs") || !item.at("inputs").is_object()) malformed(index, "missing 'inputs' object");
    for (const auto& [name, raw] : item.at("inputs").items()) {
        if (!is_identifier(name)) malformed(index, "parameter name '" + name + "'");
        if (!raw.is_string()) malformed(index, "input '" + name + "' is not a string");
        auto binding = parse_binding(raw.get<std::string>());
        if (!binding) malformed(index, "input '" + name + "' has bad reference '" + raw.get<std::string>() + "'");
        inv.inputs.emplace(name, std::move(*binding));
    }
    return inv;
}

}  // namespace

Plan parse_plan(std::string_view llm_output) {
    const Block block = find_last_block(llm_output);

    json steps;
    try {
        steps = json::parse(trim(block.body));
    } catch (const json::parse_error&) {
        malformed(0, "FINAL_PLAN body is not valid JSON");
    }
    if (!steps.is_array()) malformed(0, "FINAL_PLAN body is not an array");
    if (steps.empty()) throw Error(Errc::empty_plan, "FINAL_PLAN holds no steps");

    Plan plan;
    plan.raw_planner_output = std::string(llm_output);
    for (std::size_t i = 0; i < steps.size(); ++i) plan.chosen.push_back(parse_step(steps[i], i + 1));
    capture_deliberation(llm_output.substr(0, block.fence_start), plan);
    return plan;
}

std::string render_plan_block(const std::vector<TaskInvocation>& chosen) {
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();
    for (const auto& inv : chosen) steps.push_back(detail::invocation_to_json(inv));
    return "```FINAL_PLAN\n" + steps.dump(2, ' ', false, json::error_handler_t::replace) + "\n```";
}

}  // namespace cha
