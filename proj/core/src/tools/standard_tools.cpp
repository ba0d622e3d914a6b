#include "cha/tools/standard_tools.hpp"

#include "cha/util/text.hpp"

namespace cha::tools {

std::vector<ToolSpec> standard_tool_specs() {
    using T = SemanticType;
    std::vector<ToolSpec> specs;

    specs.push_back(ToolSpec{
        std::string(kSpeechToText),
        "Transcribes the user's recorded voice into text. The pipeline already runs this on every "
        "voice message before planning, so plans rarely need it.",
        {{"audio", T::audio, true}},
        {{"transcript", T::text, true}},
        {}});

    specs.push_back(ToolSpec{
        std::string(kEmotionRecognition),
        "Detects the user's current emotional state (neutral, happy, sad or angry) from the tone of "
        "their recorded voice. Bind audio to $audio.",
        {{"audio", T::audio, true}},
        {{"emotion", T::emotion, true}, {"confidence", T::number, true}},
        {}});

    specs.push_back(ToolSpec{
        std::string(kWebSearch),
        "Searches reliable mental-health sources on the internet and returns the top results. When "
        "the user's emotional state is supplied, the search is targeted to both the question and "
        "that state.",
        {{"query", T::text, true}, {"emotion", T::emotion, false}},
        {{"hits", T::hits, true}},
        {}});

    specs.push_back(ToolSpec{
        std::string(kExtractText),
        "Fetches one web page and returns its readable text. Bind url to a URL or to the hits of an "
        "earlier web_search step; the first hit is used.",
        {{"url", T::url, true}},
        {{"content", T::text, true}},
        {}});

    specs.push_back(ToolSpec{
        std::string(kTextToSpeech),
        "Converts response text into spoken audio. The pipeline already runs this on the final "
        "response, so plans rarely need it.",
        {{"text", T::text, true}},
        {{"audio", T::audio, true}, {"echo_text", T::text, false}},
        {}});

    return specs;
}

std::string compose_search_query(std::string_view query, EmotionLabel emotion) {
    return std::string(query) + " | user emotional state: " + std::string(to_string(emotion));
}

void apply_input_rules(const ToolSpec& spec, ValueMap& inputs) {
    if (spec.name != kWebSearch) return;
    auto emotion = inputs.find("emotion");
    auto query = inputs.find("query");
    if (emotion == inputs.end() || query == inputs.end()) return;
    auto& text = std::get<std::string>(query->second);
    text = compose_search_query(text, std::get<EmotionLabel>(emotion->second));
}

void apply_output_rules(const ToolSpec& spec, const ToolLimits& limits, ValueMap& outputs) {
    if (spec.name == kWebSearch) {
        if (auto it = outputs.find("hits"); it != outputs.end()) {
            auto& hits = std::get<SearchHits>(it->second);
            if (hits.size() > limits.top_k) hits.resize(limits.top_k);
        }
    } else if (spec.name == kExtractText) {
        if (auto it = outputs.find("content"); it != outputs.end()) {
            auto& content = std::get<std::string>(it->second);
            content = truncate_at_whitespace(content, limits.extract_char_budget);
        }
    }
}

}  // namespace cha::tools
