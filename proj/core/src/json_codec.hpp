#pragma once

// Internal JSON helpers shared by the trace, wire-protocol and fixture codecs.

#include <string>

#include "cha/domain/plan.hpp"
#include "cha/domain/value.hpp"
#include "cha/error.hpp"
#include "json.hpp"

namespace cha::detail {

using ojson = nlohmann::ordered_json;

ojson hits_to_json(const SearchHits& hits);
SearchHits hits_from_json(const nlohmann::json& j);

/// Self-describing form used inside traces: {"text": ...}, {"emotion": ...},
/// {"audio": <digest>}, {"hits": [...]}, {"number": ...}.
ojson value_to_tagged(const Value& value);
Value value_from_tagged(const nlohmann::json& j);

ojson invocation_to_json(const TaskInvocation& inv);
TaskInvocation invocation_from_json(const nlohmann::json& j);

/// Reads a required member or throws Error(Errc::parse_error, context).
template <class T>
T get_field(const nlohmann::json& j, const char* key, const std::string& context) {
    if (!j.is_object() || !j.contains(key)) {
        throw Error(Errc::parse_error, context + ": missing '" + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw Error(Errc::parse_error, context + ": bad '" + key + "'");
    }
}

}  // namespace cha::detail
