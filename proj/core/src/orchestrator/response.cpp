#include "cha/orchestrator/response.hpp"

#include "cha/error.hpp"
#include "cha/tools/standard_tools.hpp"
#include "cha/util/text.hpp"

namespace cha {

namespace {

constexpr std::string_view kBaseSystem =
    "You are an empathetic mental-health support companion replying to a user by voice. Answer the "
    "question clearly and warmly in a few spoken-style sentences, grounded in the provided sources. "
    "Do not diagnose.";

std::string_view tone_for(EmotionLabel emotion) {
    switch (emotion) {
        case EmotionLabel::sad:
            return "The user sounds sad. Respond gently, acknowledge how they feel, and prioritize "
                   "supportive and safety resources such as counselors, helplines and crisis lines.";
        case EmotionLabel::happy:
            return "The user sounds happy. Use an upbeat, motivational tone and suggest practical "
                   "resources that help them address the issue.";
        case EmotionLabel::angry:
            return "The user sounds angry. Stay calm, validate their frustration without judgment, and "
                   "offer concrete steps that give them a sense of control.";
        case EmotionLabel::neutral:
            return "The user sounds calm. Use a warm, informative tone.";
    }
    return "";
}

/// One source text per retrieved memory entry, in memory order.
std::vector<std::string> collect_sources(const ShortTermMemory& memory) {
    std::vector<std::string> sources;
    for (const auto& entry : memory.entries()) {
        if (const auto* hits = std::get_if<SearchHits>(&entry.value)) {
            for (const auto& hit : *hits) {
                std::string line = hit.title;
                if (!hit.snippet.empty()) line += (line.empty() ? "" : " - ") + hit.snippet;
                line += " (" + hit.url + ")";
                sources.push_back(std::move(line));
            }
        } else if (entry.producer_task == tools::kExtractText) {
            if (const auto* text = std::get_if<std::string>(&entry.value); text && !trim(*text).empty()) {
                sources.push_back(*text);
            }
        }
    }
    return sources;
}

}  // namespace

LmRequest build_response_prompt(std::string_view query, const ShortTermMemory& memory, std::size_t char_budget) {
    const auto emotion = memory.first_emotion();

    LmRequest request;
    request.system_text = std::string(kBaseSystem);
    if (emotion) {
        request.system_text += ' ';
        request.system_text += tone_for(*emotion);
    }
    request.temperature = 0.0;
    request.max_output_tokens = 512;

    std::string user = "QUERY: ";
    user += query;
    user += "\nEMOTION: ";
    user += emotion ? std::string(to_string(*emotion)) : std::string("unknown");
    user += '\n';

    std::string body;
    std::size_t remaining = char_budget;
    int index = 0;
    for (const auto& source : collect_sources(memory)) {
        if (remaining == 0) break;
        std::string piece = truncate_at_whitespace(source, remaining);
        if (piece.empty()) break;
        remaining -= std::min(remaining, utf8_length(piece));
        body += "[" + std::to_string(++index) + "] " + piece + '\n';
    }
    if (body.empty()) {
        user += "SOURCES: (none)\n";
    } else {
        user += "SOURCES:\n" + body;
    }
    request.user_text = std::move(user);
    return request;
}

std::string generate_response(const LmRequest& request, LmBackend& backend) {
    const std::string text(trim(backend.complete(request)));
    if (text.empty()) throw Error(Errc::empty_completion, "responder returned only whitespace");
    return text;
}

}  // namespace cha
