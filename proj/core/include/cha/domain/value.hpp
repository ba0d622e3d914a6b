#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "cha/domain/audio.hpp"
#include "cha/domain/emotion.hpp"

namespace cha {

struct SearchHit {
    std::string title;
    std::string url;
    std::string snippet;

    friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

using SearchHits = std::vector<SearchHit>;

/// A tool input or output value. Text and URLs share the string alternative;
/// the tool schema says which one a field holds.
using Value = std::variant<std::string, EmotionLabel, AudioRef, SearchHits, double>;

/// Ordered parameter/field name -> value map.
using ValueMap = std::map<std::string, Value>;

/// Size used for memory accounting: string bytes, PCM bytes, summed hit fields.
std::size_t value_byte_size(const Value& value);

/// One-line human-readable rendering (used in memory summaries).
std::string describe_value(const Value& value);

}  // namespace cha
