#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cha {

/// How a tool parameter gets its value.
///   literal     the text itself
///   query_ref   "$query", the transcribed user question
///   audio_ref   "$audio", the user's canonical recording
///   memory_ref  "$step<k>.<field>", an output of an earlier step
struct InputBinding {
    enum class Kind { literal, query_ref, audio_ref, memory_ref };

    Kind kind = Kind::literal;
    std::string value;

    static InputBinding literal(std::string text) { return {Kind::literal, std::move(text)}; }
    static InputBinding query() { return {Kind::query_ref, "$query"}; }
    static InputBinding audio() { return {Kind::audio_ref, "$audio"}; }
    static InputBinding memory(int step, std::string_view field);

    friend bool operator==(const InputBinding&, const InputBinding&) = default;
};

struct MemoryPath {
    int step = 0;
    std::string field;

    std::string key() const;  // "step<k>.<field>"
    friend bool operator==(const MemoryPath&, const MemoryPath&) = default;
};

/// Parses "$step<k>.<identifier>" exactly; nullopt on any deviation.
std::optional<MemoryPath> parse_memory_path(std::string_view text);

/// Classifies a raw plan input value. Strings beginning with '$' must be one of
/// the three reference forms; nullopt otherwise.
std::optional<InputBinding> parse_binding(std::string_view text);

struct TaskInvocation {
    int step = 0;  // 1-based
    std::string task_name;
    std::map<std::string, InputBinding> inputs;

    friend bool operator==(const TaskInvocation&, const TaskInvocation&) = default;
};

struct Plan {
    std::vector<std::string> strategies_considered;
    std::string pros_cons;
    std::vector<TaskInvocation> chosen;
    std::string raw_planner_output;
    bool degraded_parse = false;
    int retry_count = 0;

    friend bool operator==(const Plan&, const Plan&) = default;
};

bool is_identifier(std::string_view text);

}  // namespace cha
