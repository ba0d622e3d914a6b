#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace cha {

struct LmRequest {
    std::string system_text;
    std::string user_text;
    double temperature = 0.0;  // 0..2
    int max_output_tokens = 1024;

    friend bool operator==(const LmRequest&, const LmRequest&) = default;
};

/// A chat-completion capable language model.
class LmBackend {
public:
    virtual ~LmBackend() = default;
    /// Throws Error(Errc::backend_error / backend_timeout / no_fixture).
    virtual std::string complete(const LmRequest& request) = 0;
};

/// Replays canned completions keyed by the SHA-256 of the request's user text.
class ScriptedLmBackend final : public LmBackend {
public:
    ScriptedLmBackend() = default;
    ScriptedLmBackend(ScriptedLmBackend&& other) noexcept
        : responses_(std::move(other.responses_)), calls_(other.calls_.load()) {}
    ScriptedLmBackend& operator=(ScriptedLmBackend&& other) noexcept {
        responses_ = std::move(other.responses_);
        calls_ = other.calls_.load();
        return *this;
    }

    /// File format: JSON array of {"key_digest", "response_text"}.
    static ScriptedLmBackend parse(std::string_view json_text);
    static ScriptedLmBackend load(const std::filesystem::path& path);

    static std::string key_for(std::string_view user_text);

    void add(std::string user_text_digest, std::string response_text);
    std::string complete(const LmRequest& request) override;

    std::size_t size() const { return responses_.size(); }
    int calls() const { return calls_.load(); }
    std::string to_json() const;

private:
    std::map<std::string, std::string> responses_;
    std::atomic<int> calls_{0};
};

/// OpenAI-compatible chat-completion POST.
class HttpChatBackend final : public LmBackend {
public:
    struct Options {
        std::string endpoint = "https://api.openai.com/v1/chat/completions";
        std::string model = "gpt-3.5-turbo";
        std::string api_key;  // sent as a Bearer token when non-empty
        double timeout_seconds = 60.0;
        int max_retries = 2;
    };

    explicit HttpChatBackend(Options options);
    std::string complete(const LmRequest& request) override;

private:
    Options options_;
};

}  // namespace cha
