#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace cha {

enum class Role { user, agent };
enum class MessageStatus { pending, completed, failed };

std::string_view to_string(Role role);
std::string_view to_string(MessageStatus status);
Role parse_role(std::string_view text);
MessageStatus parse_message_status(std::string_view text);

struct Message {
    std::string id;
    std::string session_id;
    Role role = Role::user;
    std::string transcript;
    std::optional<std::string> audio_ref;  // digest of the canonical clip
    std::uint64_t created_seq = 0;
    MessageStatus status = MessageStatus::completed;
    std::string failure_reason;
    std::string trace_id;
    std::string reply_to;  // agent messages: the user message they answer

    friend bool operator==(const Message&, const Message&) = default;
};

}  // namespace cha
