#include "cha/util/url.hpp"

#include <charconv>

#include "cha/error.hpp"
#include "cha/util/text.hpp"

namespace cha {

std::string UrlParts::origin() const { return scheme + "://" + host + ":" + std::to_string(port); }

UrlParts parse_url(std::string_view url) {
    UrlParts parts;
    const auto sep = url.find("://");
    if (sep == std::string_view::npos) throw Error(Errc::invalid_argument, "url " + std::string(url));
    parts.scheme = to_lower(url.substr(0, sep));
    if (parts.scheme != "http" && parts.scheme != "https") {
        throw Error(Errc::invalid_argument, "url scheme " + parts.scheme);
    }
    std::string_view rest = url.substr(sep + 3);
    const auto slash = rest.find_first_of("/?#");
    std::string_view authority = rest.substr(0, slash);
    std::string_view path = slash == std::string_view::npos ? std::string_view{} : rest.substr(slash);
    if (const auto hash = path.find('#'); hash != std::string_view::npos) path = path.substr(0, hash);
    if (const auto at = authority.rfind('@'); at != std::string_view::npos) authority.remove_prefix(at + 1);

    parts.port = parts.scheme == "https" ? 443 : 80;
    const auto colon = authority.rfind(':');
    if (colon != std::string_view::npos && authority.find(']') == std::string_view::npos) {
        const std::string_view digits = authority.substr(colon + 1);
        int port = 0;
        auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
        if (ec != std::errc{} || end != digits.data() + digits.size() || port <= 0 || port > 65535) {
            throw Error(Errc::invalid_argument, "url port " + std::string(digits));
        }
        parts.port = port;
        authority = authority.substr(0, colon);
    }
    if (authority.empty()) throw Error(Errc::invalid_argument, "url host " + std::string(url));
    parts.host = std::string(authority);
    parts.path = path.empty() ? "/" : std::string(path);
    if (parts.path.front() != '/') parts.path.insert(parts.path.begin(), '/');
    return parts;
}

std::string url_encode(std::string_view text) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : text) {
        const bool unreserved = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                                c == '-' || c == '_' || c == '.' || c == '~';
        if (unreserved) {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(kHex[c >> 4]);
            out.push_back(kHex[c & 0x0F]);
        }
    }
    return out;
}

}  // namespace cha
