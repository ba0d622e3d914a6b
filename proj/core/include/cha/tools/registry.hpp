#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cha/domain/trace.hpp"
#include "cha/domain/value.hpp"

namespace cha {

enum class SemanticType { text, audio, url, emotion, number, hits };

std::string_view to_string(SemanticType type);

struct ParamSpec {
    std::string name;
    SemanticType type = SemanticType::text;
    bool required = true;
};

struct FieldSpec {
    std::string name;
    SemanticType type = SemanticType::text;
    bool required = true;
};

/// Where a tool's work happens. `mock` endpoints name a fixture set; the
/// remaining kinds are live adapters selected by configuration.
struct BackendRef {
    enum class Kind { http, mock, serpapi, page_fetch, openai_transcription };

    Kind kind = Kind::mock;
    std::string endpoint = "bundled";
    double timeout_seconds = 30.0;
    int max_retries = 2;
};

std::string_view to_string(BackendRef::Kind kind);
BackendRef::Kind parse_backend_kind(std::string_view text);

struct ToolSpec {
    std::string name;
    std::string description;
    std::vector<ParamSpec> inputs;
    std::vector<FieldSpec> outputs;
    BackendRef backend;

    const ParamSpec* find_input(std::string_view param) const;
    const FieldSpec* find_output(std::string_view field) const;
};

struct TaskResult {
    std::string task_name;
    StepStatus status = StepStatus::ok;
    std::string error_code;
    std::string error_message;
    ValueMap outputs;
    double latency_ms = 0.0;
};

/// Executes one tool call. Inputs arrive validated and normalized; the
/// returned map is checked against the tool's output schema by invoke_tool.
class ToolBackend {
public:
    virtual ~ToolBackend() = default;
    virtual ValueMap call(const ToolSpec& spec, const ValueMap& inputs) = 0;
};

struct ToolLimits {
    std::size_t top_k = 5;
    std::size_t extract_char_budget = 4000;
};

class ToolRegistry {
public:
    /// Throws Errc::duplicate_name, Errc::registry_frozen, Errc::invalid_argument.
    void register_tool(ToolSpec spec, std::shared_ptr<ToolBackend> backend);

    void freeze() { frozen_ = true; }
    bool frozen() const { return frozen_; }

    const ToolSpec* find(std::string_view name) const;
    /// Throws Errc::unknown_tool.
    const ToolSpec& at(std::string_view name) const;
    ToolBackend& backend(std::string_view name) const;

    std::size_t size() const { return entries_.size(); }
    std::vector<const ToolSpec*> specs() const;

    ToolLimits limits;

private:
    struct Entry {
        ToolSpec spec;
        std::shared_ptr<ToolBackend> backend;
    };
    std::vector<Entry> entries_;
    bool frozen_ = false;
};

/// One `TOOL:` block per tool in registration order.
std::string tool_descriptions(const ToolRegistry& registry);

/// Validates `inputs` against the schema, applies the tool's input rules,
/// calls its backend and checks the outputs.
/// Throws Errc::unknown_tool, schema_violation, backend_timeout, backend_error, no_fixture.
TaskResult invoke_tool(const ToolRegistry& registry, std::string_view name, const ValueMap& inputs);

}  // namespace cha
