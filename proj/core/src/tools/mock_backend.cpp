#include <fstream>
#include <sstream>

#include "cha/error.hpp"
#include "cha/tools/backends.hpp"
#include "cha/tools/standard_tools.hpp"
#include "cha/util/text.hpp"
#include "json_codec.hpp"
#include "wire_values.hpp"

namespace cha {

using json = nlohmann::json;

FixtureSet FixtureSet::parse(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(Errc::parse_error, std::string("fixture file: ") + e.what());
    }
    if (!doc.is_array()) throw Error(Errc::parse_error, "fixture file must be an array");
    FixtureSet set;
    for (const auto& item : doc) {
        auto tool = detail::get_field<std::string>(item, "tool", "fixture");
        auto key = detail::get_field<std::string>(item, "key", "fixture");
        const auto outputs = detail::get_field<json>(item, "outputs", "fixture");
        if (!outputs.is_object()) throw Error(Errc::parse_error, "fixture outputs for " + tool);
        set.add(std::move(tool), std::move(key), outputs.dump());
    }
    return set;
}

FixtureSet FixtureSet::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot read fixture file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void FixtureSet::add(std::string tool, std::string key, std::string outputs_json) {
    auto id = std::make_pair(std::move(tool), std::move(key));
    auto [it, inserted] = entries_.insert_or_assign(id, std::move(outputs_json));
    if (inserted) order_.push_back(std::move(id));
}

const std::string* FixtureSet::find(std::string_view tool, std::string_view key) const {
    auto it = entries_.find(std::make_pair(std::string(tool), std::string(key)));
    return it == entries_.end() ? nullptr : &it->second;
}

std::string FixtureSet::to_json() const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& id : order_) {
        arr.push_back(nlohmann::ordered_json{{"tool", id.first},
                                             {"key", id.second},
                                             {"outputs", nlohmann::ordered_json::parse(entries_.at(id))}});
    }
    return arr.dump(2) + "\n";
}

std::string fixture_key(const ToolSpec& spec, const ValueMap& inputs) {
    for (const auto& param : spec.inputs) {
        auto it = inputs.find(param.name);
        if (it == inputs.end()) continue;
        if (const auto* audio = std::get_if<AudioRef>(&it->second)) return audio->digest;
        if (const auto* text = std::get_if<std::string>(&it->second)) return normalize_whitespace(*text);
        if (const auto* e = std::get_if<EmotionLabel>(&it->second)) return std::string(to_string(*e));
    }
    throw Error(Errc::no_fixture, spec.name + ": no keyable input");
}

AudioClip mock_speech_clip(std::string_view text) {
    return make_tone(440.0, 0.05 * static_cast<double>(utf8_length(text)));
}

MockBackend::MockBackend(std::shared_ptr<const FixtureSet> fixtures) : fixtures_(std::move(fixtures)) {
    if (!fixtures_) throw Error(Errc::invalid_argument, "mock backend without fixtures");
}

ValueMap MockBackend::call(const ToolSpec& spec, const ValueMap& inputs) {
    if (spec.name == tools::kTextToSpeech) {
        const auto& text = std::get<std::string>(inputs.at("text"));
        ValueMap out;
        out.emplace("audio", AudioRef::of(mock_speech_clip(text)));
        out.emplace("echo_text", text);
        return out;
    }
    const std::string key = fixture_key(spec, inputs);
    const std::string* outputs = fixtures_->find(spec.name, key);
    if (outputs == nullptr) {
        throw Error(Errc::no_fixture, spec.name + " key " + key.substr(0, 80));
    }
    return detail::outputs_from_wire(spec, json::parse(*outputs));
}

TaskResult mock_invoke(const FixtureSet& fixtures, std::string_view tool_name, const ValueMap& inputs) {
    // Non-owning view of the caller's fixtures for the duration of the call.
    auto view = std::shared_ptr<const FixtureSet>(&fixtures, [](const FixtureSet*) {});
    ToolRegistry registry;
    for (auto& spec : tools::standard_tool_specs()) {
        registry.register_tool(std::move(spec), std::make_shared<MockBackend>(view));
    }
    registry.freeze();
    return invoke_tool(registry, tool_name, inputs);
}

}  // namespace cha
