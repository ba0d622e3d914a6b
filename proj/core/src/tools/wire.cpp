// Tool backend wire protocol:
//   request  {"tool": <name>, "inputs": {<param>: <value>}}
//   response {"status": "ok", "outputs": {...}} | {"status": "error", "code": ..., "message": ...}
// Audio travels as {"audio_b64": <base64 canonical WAV>, "sample_rate": 16000}.

#include "cha/error.hpp"
#include "cha/tools/backends.hpp"
#include "cha/util/digest.hpp"
#include "json_codec.hpp"
#include "wire_values.hpp"

namespace cha {

using detail::ojson;
using json = nlohmann::json;

namespace detail {

ojson value_to_wire(const Value& value) {
    if (const auto* s = std::get_if<std::string>(&value)) return *s;
    if (const auto* e = std::get_if<EmotionLabel>(&value)) return std::string(to_string(*e));
    if (const auto* a = std::get_if<AudioRef>(&value)) {
        if (!a->clip) throw Error(Errc::schema_violation, "audio clip not loaded: " + a->digest);
        return ojson{{"audio_b64", base64_encode(encode_wav(*a->clip))}, {"sample_rate", a->clip->sample_rate}};
    }
    if (const auto* h = std::get_if<SearchHits>(&value)) return hits_to_json(*h);
    return std::get<double>(value);
}

Value value_from_wire(SemanticType type, const json& j, Errc on_error, const std::string& name) {
    const auto fail = [&](const std::string& why) { return Error(on_error, name + ": " + why); };
    switch (type) {
        case SemanticType::text:
        case SemanticType::url:
            if (!j.is_string()) throw fail("expected string");
            return j.get<std::string>();
        case SemanticType::emotion: {
            if (!j.is_string()) throw fail("expected emotion label");
            auto label = try_parse_emotion(j.get<std::string>());
            if (!label) throw fail("unknown emotion '" + j.get<std::string>() + "'");
            return *label;
        }
        case SemanticType::number:
            if (!j.is_number()) throw fail("expected number");
            return j.get<double>();
        case SemanticType::hits:
            try {
                return hits_from_json(j);
            } catch (const Error& e) {
                throw fail(e.detail());
            }
        case SemanticType::audio: {
            if (!j.is_object() || !j.contains("audio_b64") || !j.at("audio_b64").is_string()) {
                throw fail("expected {audio_b64}");
            }
            try {
                AudioClip clip = decode_wav(base64_decode(j.at("audio_b64").get<std::string>()));
                return AudioRef::of(clip.is_canonical() ? std::move(clip) : canonicalize(clip));
            } catch (const Error& e) {
                throw fail(e.detail());
            }
        }
    }
    throw fail("unsupported type");
}

ValueMap outputs_from_wire(const ToolSpec& spec, const json& outputs) {
    if (!outputs.is_object()) throw Error(Errc::backend_error, "bad_output: outputs must be an object");
    ValueMap out;
    for (const auto& [name, raw] : outputs.items()) {
        const FieldSpec* field = spec.find_output(name);
        if (field == nullptr) continue;  // unknown fields are ignored
        out.emplace(name, value_from_wire(field->type, raw, Errc::backend_error, "bad_output: " + name));
    }
    return out;
}

}  // namespace detail

namespace {

std::string dump(const ojson& j) { return j.dump(-1, ' ', false, json::error_handler_t::replace); }

json parse_body(std::string_view body, Errc on_error) {
    try {
        return json::parse(body);
    } catch (const json::parse_error&) {
        throw Error(on_error, "malformed_json");
    }
}

}  // namespace

std::string encode_invoke_request(const ToolSpec& spec, const ValueMap& inputs) {
    ojson in = ojson::object();
    for (const auto& param : spec.inputs) {
        if (auto it = inputs.find(param.name); it != inputs.end()) in[param.name] = detail::value_to_wire(it->second);
    }
    return dump(ojson{{"tool", spec.name}, {"inputs", std::move(in)}});
}

std::pair<std::string, ValueMap> decode_invoke_request(std::string_view body, const ToolRegistry& registry) {
    const json j = parse_body(body, Errc::decode_error);
    const auto tool = detail::get_field<std::string>(j, "tool", "request");
    const ToolSpec& spec = registry.at(tool);
    const auto inputs = detail::get_field<json>(j, "inputs", "request");
    if (!inputs.is_object()) throw Error(Errc::schema_violation, "inputs");
    ValueMap out;
    for (const auto& [name, raw] : inputs.items()) {
        const ParamSpec* param = spec.find_input(name);
        if (param == nullptr) throw Error(Errc::schema_violation, name);
        Errc errc = param->type == SemanticType::audio ? Errc::decode_error : Errc::schema_violation;
        out.emplace(name, detail::value_from_wire(param->type, raw, errc, name));
    }
    return {tool, std::move(out)};
}

std::string encode_invoke_ok(const ToolSpec& spec, const ValueMap& outputs) {
    ojson out = ojson::object();
    for (const auto& field : spec.outputs) {
        if (auto it = outputs.find(field.name); it != outputs.end()) out[field.name] = detail::value_to_wire(it->second);
    }
    return dump(ojson{{"status", "ok"}, {"outputs", std::move(out)}});
}

std::string encode_invoke_error(std::string_view code, std::string_view message) {
    return dump(ojson{{"status", "error"}, {"code", std::string(code)}, {"message", std::string(message)}});
}

ValueMap decode_invoke_response(const ToolSpec& spec, std::string_view body) {
    const json j = parse_body(body, Errc::backend_error);
    if (!j.is_object() || !j.contains("status") || !j.at("status").is_string()) {
        throw Error(Errc::backend_error, "malformed_response");
    }
    const auto status = j.at("status").get<std::string>();
    if (status == "error") {
        const std::string code = j.value("code", std::string("unknown"));
        const std::string message = j.value("message", std::string{});
        throw Error(Errc::backend_error, message.empty() ? code : code + ": " + message);
    }
    if (status != "ok" || !j.contains("outputs")) throw Error(Errc::backend_error, "malformed_response");
    return detail::outputs_from_wire(spec, j.at("outputs"));
}

}  // namespace cha
