#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cha/domain/emotion.hpp"
#include "cha/tools/registry.hpp"

namespace cha::tools {

inline constexpr std::string_view kSpeechToText = "speech_to_text";
inline constexpr std::string_view kEmotionRecognition = "speech_emotion_recognition";
inline constexpr std::string_view kWebSearch = "web_search";
inline constexpr std::string_view kExtractText = "extract_text";
inline constexpr std::string_view kTextToSpeech = "text_to_speech";

/// The five tools in their canonical registration order, all bound to the
/// bundled mock fixture set.
std::vector<ToolSpec> standard_tool_specs();

/// "<query> | user emotional state: <emotion>"
std::string compose_search_query(std::string_view query, EmotionLabel emotion);

/// Tool-specific input rewriting applied after schema validation:
/// web_search folds the emotion into the outbound query.
void apply_input_rules(const ToolSpec& spec, ValueMap& inputs);

/// Tool-specific output limits: web_search keeps top_k hits, extract_text
/// keeps the head of the page within the character budget.
void apply_output_rules(const ToolSpec& spec, const ToolLimits& limits, ValueMap& outputs);

}  // namespace cha::tools
