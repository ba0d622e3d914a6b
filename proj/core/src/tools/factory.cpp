#include "cha/error.hpp"
#include "cha/tools/backends.hpp"
#include "live_adapters.hpp"

namespace cha {

std::shared_ptr<ToolBackend> make_backend(const BackendRef& ref, const BackendEnv& env) {
    switch (ref.kind) {
        case BackendRef::Kind::mock: {
            auto it = env.fixture_sets.find(ref.endpoint);
            if (it == env.fixture_sets.end()) throw Error(Errc::config_error, "unknown fixture set " + ref.endpoint);
            return std::make_shared<MockBackend>(it->second);
        }
        case BackendRef::Kind::http: return std::make_shared<HttpBackend>(ref);
        case BackendRef::Kind::serpapi:
            return std::make_shared<detail::SerpApiBackend>(ref, env.search_api_key, env.top_k);
        case BackendRef::Kind::page_fetch: return std::make_shared<detail::PageFetchBackend>(ref);
        case BackendRef::Kind::openai_transcription:
            return std::make_shared<detail::OpenAiTranscriptionBackend>(ref, env.lm_api_key);
    }
    throw Error(Errc::config_error, "backend kind");
}

ToolRegistry make_standard_registry(const std::vector<ToolSpec>& specs, const BackendEnv& env, ToolLimits limits) {
    ToolRegistry registry;
    registry.limits = limits;
    for (const auto& spec : specs) registry.register_tool(spec, make_backend(spec.backend, env));
    registry.freeze();
    return registry;
}

}  // namespace cha
