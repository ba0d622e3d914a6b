#include "cha/tools/registry.hpp"

#include <chrono>

#include "cha/error.hpp"
#include "cha/tools/standard_tools.hpp"

namespace cha {

std::string_view to_string(SemanticType type) {
    switch (type) {
        case SemanticType::text: return "text";
        case SemanticType::audio: return "audio";
        case SemanticType::url: return "url";
        case SemanticType::emotion: return "emotion";
        case SemanticType::number: return "number";
        case SemanticType::hits: return "hits";
    }
    return "text";
}

std::string_view to_string(BackendRef::Kind kind) {
    switch (kind) {
        case BackendRef::Kind::http: return "http";
        case BackendRef::Kind::mock: return "mock";
        case BackendRef::Kind::serpapi: return "serpapi";
        case BackendRef::Kind::page_fetch: return "page_fetch";
        case BackendRef::Kind::openai_transcription: return "openai_transcription";
    }
    return "mock";
}

BackendRef::Kind parse_backend_kind(std::string_view text) {
    for (auto kind : {BackendRef::Kind::http, BackendRef::Kind::mock, BackendRef::Kind::serpapi,
                      BackendRef::Kind::page_fetch, BackendRef::Kind::openai_transcription}) {
        if (text == to_string(kind)) return kind;
    }
    throw Error(Errc::config_error, "backend kind " + std::string(text));
}

const ParamSpec* ToolSpec::find_input(std::string_view param) const {
    for (const auto& p : inputs) {
        if (p.name == param) return &p;
    }
    return nullptr;
}

const FieldSpec* ToolSpec::find_output(std::string_view field) const {
    for (const auto& f : outputs) {
        if (f.name == field) return &f;
    }
    return nullptr;
}

void ToolRegistry::register_tool(ToolSpec spec, std::shared_ptr<ToolBackend> backend) {
    if (frozen_) throw Error(Errc::registry_frozen, spec.name);
    if (!is_identifier(spec.name)) throw Error(Errc::invalid_argument, "tool name " + spec.name);
    if (find(spec.name) != nullptr) throw Error(Errc::duplicate_name, spec.name);
    if (!backend) throw Error(Errc::invalid_argument, "tool without backend " + spec.name);
    if (spec.backend.timeout_seconds <= 0 || spec.backend.max_retries < 0) {
        throw Error(Errc::invalid_argument, "backend limits for " + spec.name);
    }
    entries_.push_back(Entry{std::move(spec), std::move(backend)});
}

const ToolSpec* ToolRegistry::find(std::string_view name) const {
    for (const auto& e : entries_) {
        if (e.spec.name == name) return &e.spec;
    }
    return nullptr;
}

const ToolSpec& ToolRegistry::at(std::string_view name) const {
    if (const auto* spec = find(name)) return *spec;
    throw Error(Errc::unknown_tool, std::string(name));
}

ToolBackend& ToolRegistry::backend(std::string_view name) const {
    for (const auto& e : entries_) {
        if (e.spec.name == name) return *e.backend;
    }
    throw Error(Errc::unknown_tool, std::string(name));
}

std::vector<const ToolSpec*> ToolRegistry::specs() const {
    std::vector<const ToolSpec*> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(&e.spec);
    return out;
}

std::string tool_descriptions(const ToolRegistry& registry) {
    std::string out;
    for (const ToolSpec* spec : registry.specs()) {
        if (!out.empty()) out += '\n';
        out += "TOOL: " + spec->name + '\n';
        out += "DESCRIPTION: " + spec->description + '\n';
        out += "INPUTS:\n";
        for (const auto& p : spec->inputs) {
            out += "  - " + p.name + ": " + std::string(to_string(p.type));
            if (!p.required) out += " (optional)";
            out += '\n';
        }
        out += "OUTPUTS:\n";
        for (const auto& f : spec->outputs) {
            out += "  - " + f.name + ": " + std::string(to_string(f.type)) + '\n';
        }
    }
    return out;
}

namespace {

Value coerce_input(const ParamSpec& param, const Value& value) {
    const auto violation = [&] { return Error(Errc::schema_violation, param.name); };
    switch (param.type) {
        case SemanticType::text:
            if (std::holds_alternative<std::string>(value)) return value;
            throw violation();
        case SemanticType::url:
            if (const auto* s = std::get_if<std::string>(&value)) {
                if (s->empty()) throw violation();
                return value;
            }
            if (const auto* hits = std::get_if<SearchHits>(&value)) {
                if (hits->empty()) throw violation();
                return hits->front().url;
            }
            throw violation();
        case SemanticType::audio:
            if (const auto* a = std::get_if<AudioRef>(&value); a && !a->digest.empty()) return value;
            throw violation();
        case SemanticType::emotion:
            if (std::holds_alternative<EmotionLabel>(value)) return value;
            if (const auto* s = std::get_if<std::string>(&value)) {
                if (auto e = try_parse_emotion(*s)) return *e;
            }
            throw violation();
        case SemanticType::number:
            if (std::holds_alternative<double>(value)) return value;
            throw violation();
        case SemanticType::hits:
            if (std::holds_alternative<SearchHits>(value)) return value;
            throw violation();
    }
    throw violation();
}

bool output_matches(SemanticType type, const Value& value) {
    switch (type) {
        case SemanticType::text:
        case SemanticType::url: return std::holds_alternative<std::string>(value);
        case SemanticType::audio: {
            const auto* a = std::get_if<AudioRef>(&value);
            return a != nullptr && !a->digest.empty();
        }
        case SemanticType::emotion: return std::holds_alternative<EmotionLabel>(value);
        case SemanticType::number: return std::holds_alternative<double>(value);
        case SemanticType::hits: return std::holds_alternative<SearchHits>(value);
    }
    return false;
}

ValueMap validate_inputs(const ToolSpec& spec, const ValueMap& inputs) {
    ValueMap out;
    for (const auto& [name, value] : inputs) {
        const ParamSpec* param = spec.find_input(name);
        if (param == nullptr) throw Error(Errc::schema_violation, name);
        out.emplace(name, coerce_input(*param, value));
    }
    for (const auto& param : spec.inputs) {
        if (param.required && !out.contains(param.name)) throw Error(Errc::schema_violation, param.name);
    }
    return out;
}

ValueMap check_outputs(const ToolSpec& spec, ValueMap raw) {
    ValueMap out;
    for (const auto& field : spec.outputs) {
        auto it = raw.find(field.name);
        if (it == raw.end()) {
            if (field.required) throw Error(Errc::backend_error, "bad_output: missing " + field.name);
            continue;
        }
        if (!output_matches(field.type, it->second)) {
            throw Error(Errc::backend_error, "bad_output: " + field.name);
        }
        out.emplace(field.name, std::move(it->second));
    }
    return out;
}

}  // namespace

TaskResult invoke_tool(const ToolRegistry& registry, std::string_view name, const ValueMap& inputs) {
    const ToolSpec& spec = registry.at(name);
    ValueMap prepared = validate_inputs(spec, inputs);
    tools::apply_input_rules(spec, prepared);

    const auto start = std::chrono::steady_clock::now();
    ValueMap raw;
    try {
        raw = registry.backend(name).call(spec, prepared);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(Errc::backend_error, e.what());
    }
    const auto elapsed = std::chrono::steady_clock::now() - start;

    TaskResult result;
    result.task_name = spec.name;
    result.outputs = check_outputs(spec, std::move(raw));
    tools::apply_output_rules(spec, registry.limits, result.outputs);
    result.latency_ms = std::chrono::duration<double, std::milli>(elapsed).count();
    return result;
}

}  // namespace cha
