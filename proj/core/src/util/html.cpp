#include "cha/util/html.hpp"

#include <array>
#include <charconv>
#include <cstdint>

#include "cha/util/text.hpp"

namespace cha {

namespace {

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x110000) {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

/// Decodes the entity starting at text[0] == '&'. Returns consumed length, 0 if none.
std::size_t decode_entity(std::string_view text, std::string& out) {
    const auto semi = text.find(';');
    if (semi == std::string_view::npos || semi > 10) return 0;
    const std::string_view name = text.substr(1, semi - 1);
    static constexpr std::array<std::pair<std::string_view, std::string_view>, 8> kNamed = {{
        {"amp", "&"}, {"lt", "<"}, {"gt", ">"}, {"quot", "\""},
        {"apos", "'"}, {"nbsp", " "}, {"mdash", "\xE2\x80\x94"}, {"hellip", "\xE2\x80\xA6"},
    }};
    for (const auto& [entity, replacement] : kNamed) {
        if (name == entity) {
            out += replacement;
            return semi + 1;
        }
    }
    if (name.size() >= 2 && name[0] == '#') {
        std::uint32_t cp = 0;
        const bool hex = name[1] == 'x' || name[1] == 'X';
        const std::string_view digits = name.substr(hex ? 2 : 1);
        auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
        if (ec == std::errc{} && end == digits.data() + digits.size()) {
            append_utf8(out, cp);
            return semi + 1;
        }
    }
    return 0;
}

bool tag_named(std::string_view tag_body, std::string_view name) {
    if (!starts_with_icase(tag_body, name)) return false;
    if (tag_body.size() == name.size()) return true;
    const char next = tag_body[name.size()];
    return next == ' ' || next == '>' || next == '\t' || next == '\n' || next == '/';
}

}  // namespace

std::string html_to_text(std::string_view html) {
    static constexpr std::array<std::string_view, 4> kSkipped = {"script", "style", "noscript", "head"};
    static constexpr std::array<std::string_view, 12> kBreaks = {
        "p", "br", "div", "li", "h1", "h2", "h3", "h4", "tr", "section", "article", "title"};

    std::string out;
    std::size_t i = 0;
    while (i < html.size()) {
        const char c = html[i];
        if (c == '<') {
            if (html.substr(i, 4) == "<!--") {
                const auto end = html.find("-->", i + 4);
                i = end == std::string_view::npos ? html.size() : end + 3;
                continue;
            }
            const auto close = html.find('>', i);
            if (close == std::string_view::npos) break;
            const std::string_view body = html.substr(i + 1, close - i - 1);
            bool skipped = false;
            for (std::string_view name : kSkipped) {
                if (tag_named(body, name)) {
                    const std::string end_tag = "</" + std::string(name);
                    std::size_t search = close;
                    std::size_t found = std::string_view::npos;
                    while (search < html.size()) {
                        const auto lt = html.find("</", search);
                        if (lt == std::string_view::npos) break;
                        if (starts_with_icase(html.substr(lt), end_tag)) {
                            found = lt;
                            break;
                        }
                        search = lt + 2;
                    }
                    const auto end_close = found == std::string_view::npos ? std::string_view::npos : html.find('>', found);
                    i = end_close == std::string_view::npos ? html.size() : end_close + 1;
                    skipped = true;
                    break;
                }
            }
            if (skipped) continue;
            std::string_view tag = body;
            if (!tag.empty() && tag.front() == '/') tag.remove_prefix(1);
            for (std::string_view name : kBreaks) {
                if (tag_named(tag, name)) {
                    out.push_back(' ');
                    break;
                }
            }
            i = close + 1;
        } else if (c == '&') {
            const std::size_t used = decode_entity(html.substr(i), out);
            if (used == 0) {
                out.push_back('&');
                ++i;
            } else {
                i += used;
            }
        } else {
            out.push_back(c);
            ++i;
        }
    }
    return normalize_whitespace(out);
}

}  // namespace cha
