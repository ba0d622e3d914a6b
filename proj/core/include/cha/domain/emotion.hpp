#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace cha {

enum class EmotionLabel { neutral, happy, sad, angry };

inline constexpr std::array<EmotionLabel, 4> kAllEmotions = {
    EmotionLabel::neutral, EmotionLabel::happy, EmotionLabel::sad, EmotionLabel::angry};

/// The three tones the evaluation corpus is recorded in.
inline constexpr std::array<EmotionLabel, 3> kCorpusEmotions = {
    EmotionLabel::happy, EmotionLabel::sad, EmotionLabel::angry};

std::string_view to_string(EmotionLabel label);

/// Case-insensitive, whitespace-trimmed. Throws Error(Errc::unknown_emotion).
EmotionLabel parse_emotion(std::string_view text);

std::optional<EmotionLabel> try_parse_emotion(std::string_view text);

}  // namespace cha
