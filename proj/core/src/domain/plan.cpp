#include "cha/domain/plan.hpp"

#include <charconv>

namespace cha {

bool is_identifier(std::string_view text) {
    if (text.empty() || !(text.front() >= 'a' && text.front() <= 'z')) return false;
    for (char c : text) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
        if (!ok) return false;
    }
    return true;
}

InputBinding InputBinding::memory(int step, std::string_view field) {
    return {Kind::memory_ref, "$step" + std::to_string(step) + "." + std::string(field)};
}

std::string MemoryPath::key() const { return "step" + std::to_string(step) + "." + field; }

std::optional<MemoryPath> parse_memory_path(std::string_view text) {
    constexpr std::string_view prefix = "$step";
    if (text.substr(0, prefix.size()) != prefix) return std::nullopt;
    text.remove_prefix(prefix.size());
    const auto dot = text.find('.');
    if (dot == std::string_view::npos || dot == 0) return std::nullopt;
    const std::string_view digits = text.substr(0, dot);
    if (digits.front() == '0' || digits.size() > 6) return std::nullopt;
    for (char c : digits) {
        if (c < '0' || c > '9') return std::nullopt;
    }
    int step = 0;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), step);
    if (ec != std::errc{} || end != digits.data() + digits.size()) return std::nullopt;
    const std::string_view field = text.substr(dot + 1);
    if (!is_identifier(field)) return std::nullopt;
    return MemoryPath{step, std::string(field)};
}

std::optional<InputBinding> parse_binding(std::string_view text) {
    if (text.empty() || text.front() != '$') return InputBinding::literal(std::string(text));
    if (text == "$query") return InputBinding::query();
    if (text == "$audio") return InputBinding::audio();
    if (parse_memory_path(text)) return InputBinding{InputBinding::Kind::memory_ref, std::string(text)};
    return std::nullopt;
}

}  // namespace cha
