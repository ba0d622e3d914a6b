#include "cha/domain/emotion.hpp"

#include <string>

#include "cha/error.hpp"
#include "cha/util/text.hpp"

namespace cha {

std::string_view to_string(EmotionLabel label) {
    switch (label) {
        case EmotionLabel::neutral: return "neutral";
        case EmotionLabel::happy: return "happy";
        case EmotionLabel::sad: return "sad";
        case EmotionLabel::angry: return "angry";
    }
    return "neutral";
}

std::optional<EmotionLabel> try_parse_emotion(std::string_view text) {
    const std::string token = to_lower(trim(text));
    for (EmotionLabel label : kAllEmotions) {
        if (token == to_string(label)) return label;
    }
    return std::nullopt;
}

EmotionLabel parse_emotion(std::string_view text) {
    if (auto label = try_parse_emotion(text)) return *label;
    throw Error(Errc::unknown_emotion, std::string(text));
}

}  // namespace cha
