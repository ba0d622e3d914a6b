#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "cha/domain/message.hpp"
#include "cha/service/config.hpp"

namespace cha {

struct PostedMessage {
    std::string user_message_id;
    std::string agent_message_id;
};

/// The chat service: sessions, voice messages dispatched to a worker pool,
/// content-addressed audio and the trace log, all under config.data_dir.
class ChatService {
public:
    explicit ChatService(ServiceConfig config);
    ~ChatService();
    ChatService(const ChatService&) = delete;
    ChatService& operator=(const ChatService&) = delete;

    std::string create_session();
    /// Throws not_found, unsupported_format, payload_too_large, decode_error.
    PostedMessage post_voice_message(const std::string& session_id, std::string_view audio_bytes,
                                     std::string_view format);
    /// Throws not_found.
    Message get_message(const std::string& session_id, const std::string& message_id) const;
    std::string get_audio(const std::string& digest) const;
    std::string get_trace_json(const std::string& trace_id) const;

    /// Blocks until every dispatched pipeline run has finished.
    void wait_idle();

    /// Binds the HTTP server; returns the bound port.
    int bind();
    /// Serves until stop(). bind() must have succeeded.
    void listen();
    void stop();

    const ServiceConfig& config() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// JSON body for a message as served by the API.
std::string message_to_api_json(const Message& message);

}  // namespace cha
