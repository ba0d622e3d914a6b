#include "cha/planner/lm.hpp"

#include <fstream>
#include <sstream>

#include "cha/error.hpp"
#include "cha/util/digest.hpp"
#include "http_retry.hpp"
#include "json_codec.hpp"

namespace cha {

using json = nlohmann::json;

ScriptedLmBackend ScriptedLmBackend::parse(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(Errc::parse_error, std::string("lm script: ") + e.what());
    }
    if (!doc.is_array()) throw Error(Errc::parse_error, "lm script must be an array");
    ScriptedLmBackend backend;
    for (const auto& item : doc) {
        backend.add(detail::get_field<std::string>(item, "key_digest", "lm script"),
                    detail::get_field<std::string>(item, "response_text", "lm script"));
    }
    return backend;
}

ScriptedLmBackend ScriptedLmBackend::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot read lm script " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string ScriptedLmBackend::key_for(std::string_view user_text) { return sha256_hex(user_text); }

void ScriptedLmBackend::add(std::string user_text_digest, std::string response_text) {
    responses_.insert_or_assign(std::move(user_text_digest), std::move(response_text));
}

std::string ScriptedLmBackend::complete(const LmRequest& request) {
    ++calls_;
    const std::string key = key_for(request.user_text);
    auto it = responses_.find(key);
    if (it == responses_.end()) throw Error(Errc::no_fixture, "lm script key " + key);
    return it->second;
}

std::string ScriptedLmBackend::to_json() const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& [key, text] : responses_) {
        arr.push_back(nlohmann::ordered_json{{"key_digest", key}, {"response_text", text}});
    }
    return arr.dump(2) + "\n";
}

HttpChatBackend::HttpChatBackend(Options options) : options_(std::move(options)) { parse_url(options_.endpoint); }

std::string HttpChatBackend::complete(const LmRequest& request) {
    const UrlParts target = parse_url(options_.endpoint);
    nlohmann::ordered_json body{
        {"model", options_.model},
        {"messages", nlohmann::ordered_json::array({
                         {{"role", "system"}, {"content", request.system_text}},
                         {{"role", "user"}, {"content", request.user_text}},
                     })},
        {"temperature", request.temperature},
        {"max_tokens", request.max_output_tokens},
    };
    const std::string payload = body.dump(-1, ' ', false, json::error_handler_t::replace);
    httplib::Headers headers;
    if (!options_.api_key.empty()) headers.emplace("Authorization", "Bearer " + options_.api_key);

    const auto response = detail::send_with_retries(
        target, detail::RetryPolicy{options_.timeout_seconds, options_.max_retries},
        [&](httplib::Client& client) { return client.Post(target.path, headers, payload, "application/json"); });

    json doc;
    try {
        doc = json::parse(response.body);
    } catch (const json::parse_error&) {
        throw Error(Errc::backend_error, "malformed chat completion");
    }
    try {
        return doc.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception&) {
        throw Error(Errc::backend_error, "chat completion without content");
    }
}

}  // namespace cha
