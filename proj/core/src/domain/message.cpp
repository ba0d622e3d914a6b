#include "cha/domain/message.hpp"

#include <string>

#include "cha/error.hpp"

namespace cha {

std::string_view to_string(Role role) { return role == Role::user ? "user" : "agent"; }

std::string_view to_string(MessageStatus status) {
    switch (status) {
        case MessageStatus::pending: return "pending";
        case MessageStatus::completed: return "completed";
        case MessageStatus::failed: return "failed";
    }
    return "failed";
}

Role parse_role(std::string_view text) {
    if (text == "user") return Role::user;
    if (text == "agent") return Role::agent;
    throw Error(Errc::parse_error, "role " + std::string(text));
}

MessageStatus parse_message_status(std::string_view text) {
    if (text == "pending") return MessageStatus::pending;
    if (text == "completed") return MessageStatus::completed;
    if (text == "failed") return MessageStatus::failed;
    throw Error(Errc::parse_error, "message status " + std::string(text));
}

}  // namespace cha
