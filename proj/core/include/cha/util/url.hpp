#pragma once

#include <string>
#include <string_view>

namespace cha {

struct UrlParts {
    std::string scheme;  // "http" or "https"
    std::string host;
    int port = 0;
    std::string path;  // begins with '/', includes any query string

    /// "scheme://host:port", the form HTTP clients are constructed from.
    std::string origin() const;
};

/// Throws Error(Errc::invalid_argument) for anything but absolute http(s) URLs.
UrlParts parse_url(std::string_view url);

/// Percent-encodes everything outside the RFC 3986 unreserved set.
std::string url_encode(std::string_view text);

}  // namespace cha
