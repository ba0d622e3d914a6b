// Live adapters for third-party APIs. Selected by configuration; the hermetic
// test suites only exercise them against local stub servers.

#include "live_adapters.hpp"

#include "cha/error.hpp"
#include "cha/tools/standard_tools.hpp"
#include "cha/util/html.hpp"
#include "cha/util/url.hpp"
#include "http_retry.hpp"
#include "json.hpp"

namespace cha::detail {

using json = nlohmann::json;

namespace {

json parse_json_body(const std::string& body, const char* what) {
    try {
        return json::parse(body);
    } catch (const json::parse_error&) {
        throw Error(Errc::backend_error, std::string("malformed_response from ") + what);
    }
}

RetryPolicy policy_of(const BackendRef& ref) { return RetryPolicy{ref.timeout_seconds, ref.max_retries}; }

}  // namespace

SerpApiBackend::SerpApiBackend(BackendRef ref, std::string api_key, std::size_t top_k)
    : ref_(std::move(ref)), api_key_(std::move(api_key)), top_k_(top_k) {
    if (ref_.endpoint.empty() || ref_.endpoint == "default") ref_.endpoint = "https://serpapi.com/search.json";
    parse_url(ref_.endpoint);
}

ValueMap SerpApiBackend::call(const ToolSpec& spec, const ValueMap& inputs) {
    if (spec.name != tools::kWebSearch) throw Error(Errc::backend_error, "serpapi serves web_search only");
    const UrlParts target = parse_url(ref_.endpoint);
    const auto& query = std::get<std::string>(inputs.at("query"));
    std::string path = target.path;
    path += path.find('?') == std::string::npos ? '?' : '&';
    path += "engine=google&q=" + url_encode(query) + "&num=" + std::to_string(top_k_) + "&api_key=" + url_encode(api_key_);

    const auto response = send_with_retries(target, policy_of(ref_),
                                            [&](httplib::Client& client) { return client.Get(path); });
    const json doc = parse_json_body(response.body, "search api");
    if (doc.contains("error")) throw Error(Errc::backend_error, "search_api: " + doc.value("error", std::string{}));
    SearchHits hits;
    if (doc.contains("organic_results") && doc.at("organic_results").is_array()) {
        for (const auto& r : doc.at("organic_results")) {
            if (!r.is_object() || !r.contains("link") || !r.at("link").is_string()) continue;
            SearchHit hit;
            hit.url = r.at("link").get<std::string>();
            hit.title = r.value("title", std::string{});
            hit.snippet = r.value("snippet", std::string{});
            if (!hit.url.empty()) hits.push_back(std::move(hit));
        }
    }
    ValueMap out;
    out.emplace("hits", std::move(hits));
    return out;
}

PageFetchBackend::PageFetchBackend(BackendRef ref) : ref_(std::move(ref)) {}

ValueMap PageFetchBackend::call(const ToolSpec& spec, const ValueMap& inputs) {
    if (spec.name != tools::kExtractText) throw Error(Errc::backend_error, "page_fetch serves extract_text only");
    const UrlParts target = parse_url(std::get<std::string>(inputs.at("url")));
    const auto response = send_with_retries(target, policy_of(ref_), [&](httplib::Client& client) {
        client.set_follow_location(true);
        return client.Get(target.path, httplib::Headers{{"User-Agent", "voicecha/0.1"}});
    });
    ValueMap out;
    out.emplace("content", html_to_text(response.body));
    return out;
}

OpenAiTranscriptionBackend::OpenAiTranscriptionBackend(BackendRef ref, std::string api_key, std::string model)
    : ref_(std::move(ref)), api_key_(std::move(api_key)), model_(std::move(model)) {
    if (ref_.endpoint.empty() || ref_.endpoint == "default") {
        ref_.endpoint = "https://api.openai.com/v1/audio/transcriptions";
    }
    parse_url(ref_.endpoint);
}

ValueMap OpenAiTranscriptionBackend::call(const ToolSpec& spec, const ValueMap& inputs) {
    if (spec.name != tools::kSpeechToText) throw Error(Errc::backend_error, "transcription serves speech_to_text only");
    const auto& audio = std::get<AudioRef>(inputs.at("audio"));
    if (!audio.clip) throw Error(Errc::schema_violation, "audio");
    const UrlParts target = parse_url(ref_.endpoint);
    const std::string wav = encode_wav(*audio.clip);
    const httplib::MultipartFormDataItems items = {
        {"file", wav, "speech.wav", "audio/wav"},
        {"model", model_, "", ""},
        {"response_format", "json", "", ""},
    };
    const httplib::Headers headers = {{"Authorization", "Bearer " + api_key_}};
    const auto response = send_with_retries(
        target, policy_of(ref_), [&](httplib::Client& client) { return client.Post(target.path, headers, items); });
    const json doc = parse_json_body(response.body, "transcription api");
    if (!doc.contains("text") || !doc.at("text").is_string()) {
        throw Error(Errc::backend_error, "bad_output: transcription without text");
    }
    ValueMap out;
    out.emplace("transcript", doc.at("text").get<std::string>());
    return out;
}

}  // namespace cha::detail
