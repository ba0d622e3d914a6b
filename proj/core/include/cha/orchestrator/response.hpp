#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "cha/orchestrator/memory.hpp"
#include "cha/planner/lm.hpp"

namespace cha {

inline constexpr std::size_t kDefaultResponseCharBudget = 6000;

/// Empathetic response prompt. The system text is conditioned on the first
/// detected emotion; the user text holds QUERY, EMOTION and the retrieved
/// sources, added greedily in memory order until `char_budget` is spent.
LmRequest build_response_prompt(std::string_view query, const ShortTermMemory& memory,
                                std::size_t char_budget = kDefaultResponseCharBudget);

/// Trimmed, non-empty completion. Throws Errc::empty_completion plus backend errors.
std::string generate_response(const LmRequest& request, LmBackend& backend);

}  // namespace cha
