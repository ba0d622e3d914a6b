#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cha {

/// Every failure the library reports carries one of these codes.
enum class Errc {
    unknown_emotion,
    invalid_argument,
    // tools
    duplicate_name,
    registry_frozen,
    unknown_tool,
    schema_violation,
    backend_timeout,
    backend_error,
    no_fixture,
    // planner
    no_final_plan_block,
    malformed_step,
    empty_plan,
    unknown_task,
    bad_reference,
    type_mismatch,
    planning_failed,
    // orchestrator
    missing_memory_key,
    duplicate_memory_key,
    empty_completion,
    // service
    not_found,
    unsupported_format,
    payload_too_large,
    decode_error,
    io_error,
    config_error,
    // eval
    empty_trace_set,
    missing_cell,
    out_of_range_score,
    duplicate_score,
    parse_error,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string detail);

    Errc code() const noexcept { return code_; }

    /// Short machine-oriented detail: a parameter name, a path, a wire error code.
    const std::string& detail() const noexcept { return detail_; }

private:
    Errc code_;
    std::string detail_;
};

}  // namespace cha
