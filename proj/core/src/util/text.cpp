#include "cha/util/text.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

namespace cha {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_continuation(char c) { return (static_cast<unsigned char>(c) & 0xC0) == 0x80; }

}  // namespace

std::string_view trim(std::string_view text) {
    while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
    while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
    return text;
}

std::string to_lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string normalize_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char c : trim(text)) {
        if (is_space(c)) {
            pending_space = true;
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(c);
    }
    return out;
}

std::size_t utf8_length(std::string_view text) {
    return static_cast<std::size_t>(
        std::count_if(text.begin(), text.end(), [](char c) { return !is_continuation(c); }));
}

std::string truncate_at_whitespace(std::string_view text, std::size_t budget) {
    // Byte offset of code point number `budget`.
    std::size_t cut = 0;
    std::size_t seen = 0;
    while (cut < text.size()) {
        if (!is_continuation(text[cut])) {
            if (seen == budget) break;
            ++seen;
        }
        ++cut;
    }
    if (cut >= text.size()) return std::string(text);
    // A cut exactly before a whitespace keeps the whole last word.
    if (!is_space(text[cut])) {
        std::size_t ws = cut;
        while (ws > 0 && !is_space(text[ws - 1])) --ws;
        if (ws > 0) cut = ws;
    }
    std::string_view head = text.substr(0, cut);
    while (!head.empty() && is_space(head.back())) head.remove_suffix(1);
    return std::string(head);
}

bool starts_with_icase(std::string_view text, std::string_view prefix) {
    if (text.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(text[i])) !=
            std::tolower(static_cast<unsigned char>(prefix[i]))) {
            return false;
        }
    }
    return true;
}

std::string format_fixed(long long units, int decimals) {
    long long scale = 1;
    for (int i = 0; i < decimals; ++i) scale *= 10;
    const bool negative = units < 0;
    const long long magnitude = std::llabs(units);
    std::string out = negative ? "-" : "";
    out += std::to_string(magnitude / scale);
    if (decimals > 0) {
        std::string frac = std::to_string(magnitude % scale);
        out += '.';
        out += std::string(static_cast<std::size_t>(decimals) - frac.size(), '0');
        out += frac;
    }
    return out;
}

}  // namespace cha
