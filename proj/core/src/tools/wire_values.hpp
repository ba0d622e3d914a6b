#pragma once

#include "cha/tools/registry.hpp"
#include "json_codec.hpp"

namespace cha::detail {

ojson value_to_wire(const Value& value);
Value value_from_wire(SemanticType type, const nlohmann::json& j, Errc on_error, const std::string& name);
ValueMap outputs_from_wire(const ToolSpec& spec, const nlohmann::json& outputs);

}  // namespace cha::detail
