#pragma once

#include <string>

#include "cha/tools/registry.hpp"

namespace cha::detail {

/// SerpAPI-compatible GET {endpoint}?engine=google&q=...&num=...&api_key=...
class SerpApiBackend final : public ToolBackend {
public:
    SerpApiBackend(BackendRef ref, std::string api_key, std::size_t top_k);
    ValueMap call(const ToolSpec& spec, const ValueMap& inputs) override;

private:
    BackendRef ref_;
    std::string api_key_;
    std::size_t top_k_;
};

/// Fetches the page itself and strips it to readable text.
class PageFetchBackend final : public ToolBackend {
public:
    explicit PageFetchBackend(BackendRef ref);
    ValueMap call(const ToolSpec& spec, const ValueMap& inputs) override;

private:
    BackendRef ref_;
};

/// OpenAI-compatible multipart audio transcription endpoint.
class OpenAiTranscriptionBackend final : public ToolBackend {
public:
    OpenAiTranscriptionBackend(BackendRef ref, std::string api_key, std::string model = "whisper-1");
    ValueMap call(const ToolSpec& spec, const ValueMap& inputs) override;

private:
    BackendRef ref_;
    std::string api_key_;
    std::string model_;
};

}  // namespace cha::detail
