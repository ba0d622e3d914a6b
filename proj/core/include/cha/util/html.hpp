#pragma once

#include <string>
#include <string_view>

namespace cha {

/// Readable text of an HTML document: script/style/noscript/head bodies are
/// dropped, tags removed, common entities decoded, whitespace collapsed.
std::string html_to_text(std::string_view html);

}  // namespace cha
