#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace cha {

std::string_view trim(std::string_view text);
std::string to_lower(std::string_view text);

/// Collapses every run of whitespace into one space and trims both ends.
std::string normalize_whitespace(std::string_view text);

/// Number of UTF-8 code points (continuation bytes are not counted).
std::size_t utf8_length(std::string_view text);

/// Keeps the head of `text` within `budget` code points. When a cut is needed it
/// lands on the last whitespace inside the budget (a hard cut when the head has
/// no whitespace) and trailing whitespace is dropped.
std::string truncate_at_whitespace(std::string_view text, std::size_t budget);

bool starts_with_icase(std::string_view text, std::string_view prefix);

/// Fixed-point rendering of `units` scaled by 10^decimals, e.g. (624, 2) -> "6.24".
std::string format_fixed(long long units, int decimals);

}  // namespace cha
