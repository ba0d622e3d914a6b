#include "json_codec.hpp"

namespace cha::detail {

ojson hits_to_json(const SearchHits& hits) {
    ojson arr = ojson::array();
    for (const auto& h : hits) {
        arr.push_back(ojson{{"title", h.title}, {"url", h.url}, {"snippet", h.snippet}});
    }
    return arr;
}

SearchHits hits_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw Error(Errc::parse_error, "hits must be an array");
    SearchHits hits;
    for (const auto& item : j) {
        SearchHit h;
        h.title = item.is_object() ? item.value("title", std::string{}) : std::string{};
        h.url = get_field<std::string>(item, "url", "search hit");
        h.snippet = item.is_object() ? item.value("snippet", std::string{}) : std::string{};
        if (h.url.empty()) throw Error(Errc::parse_error, "search hit with empty url");
        hits.push_back(std::move(h));
    }
    return hits;
}

ojson value_to_tagged(const Value& value) {
    ojson out = ojson::object();
    if (const auto* s = std::get_if<std::string>(&value)) {
        out["text"] = *s;
    } else if (const auto* e = std::get_if<EmotionLabel>(&value)) {
        out["emotion"] = std::string(to_string(*e));
    } else if (const auto* a = std::get_if<AudioRef>(&value)) {
        out["audio"] = a->digest;
    } else if (const auto* h = std::get_if<SearchHits>(&value)) {
        out["hits"] = hits_to_json(*h);
    } else {
        out["number"] = std::get<double>(value);
    }
    return out;
}

Value value_from_tagged(const nlohmann::json& j) {
    if (!j.is_object() || j.size() != 1) throw Error(Errc::parse_error, "tagged value");
    const auto it = j.begin();
    const std::string& tag = it.key();
    const nlohmann::json& body = it.value();
    if (tag == "text") return get_field<std::string>(j, "text", "value");
    if (tag == "emotion") return parse_emotion(get_field<std::string>(j, "emotion", "value"));
    if (tag == "audio") return AudioRef{get_field<std::string>(j, "audio", "value"), nullptr};
    if (tag == "hits") return hits_from_json(body);
    if (tag == "number") return get_field<double>(j, "number", "value");
    throw Error(Errc::parse_error, "unknown value tag " + tag);
}

ojson invocation_to_json(const TaskInvocation& inv) {
    ojson inputs = ojson::object();
    for (const auto& [name, binding] : inv.inputs) inputs[name] = binding.value;
    return ojson{{"step", inv.step}, {"task", inv.task_name}, {"inputs", std::move(inputs)}};
}

TaskInvocation invocation_from_json(const nlohmann::json& j) {
    TaskInvocation inv;
    inv.step = get_field<int>(j, "step", "invocation");
    inv.task_name = get_field<std::string>(j, "task", "invocation");
    const auto inputs = get_field<nlohmann::json>(j, "inputs", "invocation");
    if (!inputs.is_object()) throw Error(Errc::parse_error, "invocation inputs");
    for (const auto& [name, raw] : inputs.items()) {
        if (!raw.is_string()) throw Error(Errc::parse_error, "invocation input " + name);
        auto binding = parse_binding(raw.get<std::string>());
        if (!binding) throw Error(Errc::parse_error, "invocation binding " + name);
        inv.inputs.emplace(name, std::move(*binding));
    }
    return inv;
}

}  // namespace cha::detail
