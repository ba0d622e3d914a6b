#include "cha/error.hpp"

namespace cha {

std::string_view to_string(Errc code) {
    switch (code) {
        case Errc::unknown_emotion: return "unknown_emotion";
        case Errc::invalid_argument: return "invalid_argument";
        case Errc::duplicate_name: return "duplicate_name";
        case Errc::registry_frozen: return "registry_frozen";
        case Errc::unknown_tool: return "unknown_tool";
        case Errc::schema_violation: return "schema_violation";
        case Errc::backend_timeout: return "backend_timeout";
        case Errc::backend_error: return "backend_error";
        case Errc::no_fixture: return "no_fixture";
        case Errc::no_final_plan_block: return "no_final_plan_block";
        case Errc::malformed_step: return "malformed_step";
        case Errc::empty_plan: return "empty_plan";
        case Errc::unknown_task: return "unknown_task";
        case Errc::bad_reference: return "bad_reference";
        case Errc::type_mismatch: return "type_mismatch";
        case Errc::planning_failed: return "planning_failed";
        case Errc::missing_memory_key: return "missing_memory_key";
        case Errc::duplicate_memory_key: return "duplicate_memory_key";
        case Errc::empty_completion: return "empty_completion";
        case Errc::not_found: return "not_found";
        case Errc::unsupported_format: return "unsupported_format";
        case Errc::payload_too_large: return "payload_too_large";
        case Errc::decode_error: return "decode_error";
        case Errc::io_error: return "io_error";
        case Errc::config_error: return "config_error";
        case Errc::empty_trace_set: return "empty_trace_set";
        case Errc::missing_cell: return "missing_cell";
        case Errc::out_of_range_score: return "out_of_range_score";
        case Errc::duplicate_score: return "duplicate_score";
        case Errc::parse_error: return "parse_error";
    }
    return "unknown";
}

namespace {

std::string compose(Errc code, const std::string& detail) {
    std::string msg(to_string(code));
    if (!detail.empty()) {
        msg += ": ";
        msg += detail;
    }
    return msg;
}

}  // namespace

Error::Error(Errc code, std::string detail)
    : std::runtime_error(compose(code, detail)), code_(code), detail_(std::move(detail)) {}

}  // namespace cha
