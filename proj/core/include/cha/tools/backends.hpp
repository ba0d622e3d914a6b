#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cha/tools/registry.hpp"

namespace cha {

/// Canned tool outputs keyed by (tool, key). Audio-input tools key on the
/// clip fingerprint, text-input tools on whitespace-normalized input text.
/// Outputs are stored in wire-protocol JSON form.
class FixtureSet {
public:
    /// File format: JSON array of {"tool", "key", "outputs"}.
    static FixtureSet parse(std::string_view json_text);
    static FixtureSet load(const std::filesystem::path& path);

    /// Later entries with the same (tool, key) replace earlier ones.
    void add(std::string tool, std::string key, std::string outputs_json);
    const std::string* find(std::string_view tool, std::string_view key) const;
    std::size_t size() const { return order_.size(); }

    /// Pretty-printed JSON array in insertion order.
    std::string to_json() const;

private:
    std::map<std::pair<std::string, std::string>, std::string, std::less<>> entries_;
    std::vector<std::pair<std::string, std::string>> order_;
};

/// The lookup key a mock backend derives from already-prepared inputs.
std::string fixture_key(const ToolSpec& spec, const ValueMap& inputs);

/// Mock text_to_speech clip: 16 kHz mono 440 Hz tone, 0.05 s per character.
AudioClip mock_speech_clip(std::string_view text);

class MockBackend final : public ToolBackend {
public:
    explicit MockBackend(std::shared_ptr<const FixtureSet> fixtures);
    ValueMap call(const ToolSpec& spec, const ValueMap& inputs) override;

private:
    std::shared_ptr<const FixtureSet> fixtures_;
};

/// Runs one standard tool against a fixture set without a service registry.
TaskResult mock_invoke(const FixtureSet& fixtures, std::string_view tool_name, const ValueMap& inputs);

/// POST {endpoint}/invoke with up to 1 + max_retries attempts on transport failure.
class HttpBackend final : public ToolBackend {
public:
    explicit HttpBackend(BackendRef ref);
    ValueMap call(const ToolSpec& spec, const ValueMap& inputs) override;

    int attempts_made() const { return attempts_.load(); }

private:
    BackendRef ref_;
    std::atomic<int> attempts_{0};
};

// Wire protocol codec, shared with stub servers and the model sidecar's golden suite.
std::string encode_invoke_request(const ToolSpec& spec, const ValueMap& inputs);
/// Decodes a request body into (tool name, inputs); schema types come from `spec_lookup`.
std::pair<std::string, ValueMap> decode_invoke_request(std::string_view body, const ToolRegistry& registry);
std::string encode_invoke_ok(const ToolSpec& spec, const ValueMap& outputs);
std::string encode_invoke_error(std::string_view code, std::string_view message);
/// Throws Errc::backend_error(code) for status "error" or an unparseable body.
ValueMap decode_invoke_response(const ToolSpec& spec, std::string_view body);

/// Secrets and fixture sets a backend factory may need.
struct BackendEnv {
    std::map<std::string, std::shared_ptr<const FixtureSet>> fixture_sets;
    std::string search_api_key;
    std::string lm_api_key;
    std::size_t top_k = 5;
};

std::shared_ptr<ToolBackend> make_backend(const BackendRef& ref, const BackendEnv& env);

/// Registers the five standard tools with backends built from each spec's BackendRef.
ToolRegistry make_standard_registry(const std::vector<ToolSpec>& specs, const BackendEnv& env,
                                    ToolLimits limits = {});

}  // namespace cha
