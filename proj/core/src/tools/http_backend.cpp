#include "cha/error.hpp"
#include "cha/tools/backends.hpp"
#include "http_retry.hpp"

namespace cha {

HttpBackend::HttpBackend(BackendRef ref) : ref_(std::move(ref)) {
    parse_url(ref_.endpoint);  // validate early
}

ValueMap HttpBackend::call(const ToolSpec& spec, const ValueMap& inputs) {
    const UrlParts target = parse_url(ref_.endpoint);
    std::string path = target.path;
    while (!path.empty() && path.back() == '/') path.pop_back();
    path += "/invoke";

    const std::string body = encode_invoke_request(spec, inputs);
    const detail::RetryPolicy policy{ref_.timeout_seconds, ref_.max_retries};
    const httplib::Response response = detail::send_with_retries(
        target, policy, [&](httplib::Client& client) { return client.Post(path, body, "application/json"); },
        &attempts_);
    return decode_invoke_response(spec, response.body);
}

}  // namespace cha
