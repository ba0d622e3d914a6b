#pragma once

// Retrying HTTP helper shared by the tool backends and the chat LM backend.

#include <atomic>
#include <chrono>
#include <functional>
#include <string>
#include <thread>

#include "cha/error.hpp"
#include "cha/util/url.hpp"
#include "httplib.h"

namespace cha::detail {

struct RetryPolicy {
    double timeout_seconds = 30.0;
    int max_retries = 2;
    std::chrono::milliseconds backoff{25};
};

inline void apply_timeouts(httplib::Client& client, double seconds) {
    const auto usec = static_cast<long>(seconds * 1e6);
    const time_t sec = usec / 1000000;
    const time_t rest = usec % 1000000;
    client.set_connection_timeout(sec, rest);
    client.set_read_timeout(sec, rest);
    client.set_write_timeout(sec, rest);
}

/// Issues `send` up to 1 + max_retries times. Connection failures, timeouts
/// and non-200 statuses are retried; the 200 response is returned.
/// Throws Errc::backend_timeout when the last failure was a timeout,
/// Errc::backend_error("transport"/"http_<status>") otherwise.
inline httplib::Response send_with_retries(const UrlParts& target, const RetryPolicy& policy,
                                           const std::function<httplib::Result(httplib::Client&)>& send,
                                           std::atomic<int>* attempt_counter = nullptr) {
    std::string last_failure = "transport";
    bool last_was_timeout = false;
    const int attempts = 1 + policy.max_retries;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        if (attempt > 0) std::this_thread::sleep_for(policy.backoff * attempt);
        if (attempt_counter != nullptr) ++*attempt_counter;
        httplib::Client client(target.origin());
        apply_timeouts(client, policy.timeout_seconds);
        client.set_keep_alive(false);
        const auto started = std::chrono::steady_clock::now();
        httplib::Result result = send(client);
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        if (!result) {
            last_was_timeout = result.error() == httplib::Error::ConnectionTimeout ||
                               elapsed >= policy.timeout_seconds * 0.95;
            last_failure = "transport: " + httplib::to_string(result.error());
            continue;
        }
        if (result->status != 200) {
            last_was_timeout = false;
            last_failure = "http_" + std::to_string(result->status);
            continue;
        }
        return *result;
    }
    if (last_was_timeout) throw Error(Errc::backend_timeout, target.origin() + target.path);
    throw Error(Errc::backend_error, last_failure);
}

}  // namespace cha::detail
