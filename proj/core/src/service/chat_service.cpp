#include "cha/service/chat_service.hpp"

#include <condition_variable>
#include <deque>
#include <functional>
#include <iostream>
#include <mutex>
#include <thread>

#include "cha/error.hpp"
#include "cha/service/ingest.hpp"
#include "cha/service/store.hpp"
#include "cha/util/digest.hpp"
#include "httplib.h"
#include "json_codec.hpp"

namespace cha {

using detail::ojson;

std::string message_to_api_json(const Message& m) {
    ojson j{
        {"id", m.id},
        {"session_id", m.session_id},
        {"role", to_string(m.role)},
        {"status", to_string(m.status)},
        {"created_seq", m.created_seq},
        {"transcript", m.transcript},
        {"audio_ref", m.audio_ref ? ojson(*m.audio_ref) : ojson(nullptr)},
        {"audio_url", m.audio_ref ? ojson("/api/audio/" + *m.audio_ref) : ojson(nullptr)},
        {"trace_id", m.trace_id.empty() ? ojson(nullptr) : ojson(m.trace_id)},
        {"failure_reason", m.failure_reason.empty() ? ojson(nullptr) : ojson(m.failure_reason)},
        {"reply_to", m.reply_to.empty() ? ojson(nullptr) : ojson(m.reply_to)},
    };
    return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

namespace {

/// Fixed-size pool; jobs run in submission order across the workers.
class WorkerPool {
public:
    explicit WorkerPool(std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) threads_.emplace_back([this] { loop(); });
    }
    ~WorkerPool() {
        {
            std::lock_guard lock(mutex_);
            stopping_ = true;
        }
        wake_.notify_all();
        for (auto& t : threads_) t.join();
    }

    void submit(std::function<void()> job) {
        {
            std::lock_guard lock(mutex_);
            jobs_.push_back(std::move(job));
            ++outstanding_;
        }
        wake_.notify_one();
    }

    void wait_idle() {
        std::unique_lock lock(mutex_);
        idle_.wait(lock, [this] { return outstanding_ == 0; });
    }

private:
    void loop() {
        while (true) {
            std::function<void()> job;
            {
                std::unique_lock lock(mutex_);
                wake_.wait(lock, [this] { return stopping_ || !jobs_.empty(); });
                if (jobs_.empty()) return;
                job = std::move(jobs_.front());
                jobs_.pop_front();
            }
            job();
            {
                std::lock_guard lock(mutex_);
                --outstanding_;
            }
            idle_.notify_all();
        }
    }

    std::mutex mutex_;
    std::condition_variable wake_;
    std::condition_variable idle_;
    std::deque<std::function<void()>> jobs_;
    std::size_t outstanding_ = 0;
    bool stopping_ = false;
    std::vector<std::thread> threads_;
};

int http_status(Errc code) {
    switch (code) {
        case Errc::not_found: return 404;
        case Errc::unsupported_format: return 415;
        case Errc::payload_too_large: return 413;
        case Errc::decode_error:
        case Errc::parse_error:
        case Errc::invalid_argument: return 400;
        default: return 500;
    }
}

void send_json(httplib::Response& res, int status, const std::string& body) {
    res.status = status;
    res.set_content(body, "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, std::string_view detail) {
    send_json(res, status,
              ojson{{"error", code}, {"detail", detail}}.dump(-1, ' ', false,
                                                            nlohmann::json::error_handler_t::replace));
}

}  // namespace

struct ChatService::Impl {
    ServiceConfig config;
    std::unique_ptr<Runtime> runtime;
    BlobStore blobs;
    SessionStore sessions;
    TraceLog traces;
    Pipeline pipeline;
    httplib::Server server;
    WorkerPool pool;  // declared last: destroyed first, draining jobs that use the members above

    explicit Impl(ServiceConfig c)
        : config(std::move(c)),
          runtime(build_runtime(config)),
          blobs(config.data_dir / "audio"),
          sessions(config.data_dir / "sessions"),
          traces(config.data_dir / "traces.jsonl"),
          pipeline(runtime->registry, *runtime->planner_lm, *runtime->responder_lm, nullptr, runtime->pipeline),
          pool(config.workers) {}

    PostedMessage post(const std::string& session_id, std::string_view audio_bytes, std::string_view format);
    void run_pipeline(Message user, Message agent, AudioRef audio);
    void install_routes();
};

PostedMessage ChatService::Impl::post(const std::string& session_id, std::string_view audio_bytes,
                                      std::string_view format) {
    if (!sessions.contains(session_id)) throw Error(Errc::not_found, "session " + session_id);
    const auto fmt = parse_audio_format(format);
    if (!fmt) throw Error(Errc::unsupported_format, std::string(format));
    AudioRef audio = AudioRef::of(ingest_audio(audio_bytes, *fmt));
    blobs.put(*audio.clip);

    Message user;
    user.role = Role::user;
    user.audio_ref = audio.digest;
    user.status = MessageStatus::completed;
    user = sessions.append(session_id, user);

    Message agent;
    agent.role = Role::agent;
    agent.status = MessageStatus::pending;
    agent.reply_to = user.id;
    agent = sessions.append(session_id, agent);

    pool.submit([this, user, agent, audio] { run_pipeline(user, agent, audio); });
    return PostedMessage{user.id, agent.id};
}

void ChatService::Impl::run_pipeline(Message user, Message agent, AudioRef audio) {
    RunRequest request;
    request.session_id = user.session_id;
    request.trace_id = random_hex_id(16);
    request.user_audio = std::move(audio);
    try {
        AgentReply reply = pipeline.run(request);
        // Durable order: reply audio, then the trace, then the messages that point at them.
        if (reply.response_audio && reply.response_audio->clip) blobs.put(*reply.response_audio->clip);
        traces.append(reply.trace, reply.meta);

        user.transcript = reply.trace.query_text;
        sessions.update(user);
        agent.trace_id = reply.trace.trace_id;
        agent.transcript = reply.trace.response_text;
        if (reply.trace.outcome.finished()) {
            agent.status = MessageStatus::completed;
            agent.failure_reason = reply.trace.outcome.reason;
            if (reply.response_audio) agent.audio_ref = reply.response_audio->digest;
        } else {
            agent.status = MessageStatus::failed;
            agent.failure_reason = reply.trace.outcome.reason;
        }
        sessions.update(agent);
    } catch (const std::exception& e) {
        std::cerr << "pipeline run " << request.trace_id << " aborted: " << e.what() << "\n";
        agent.status = MessageStatus::failed;
        agent.failure_reason = "internal";
        try {
            sessions.update(agent);
        } catch (const std::exception&) {
        }
    }
}

ChatService::ChatService(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {
    impl_->install_routes();
}

ChatService::~ChatService() {
    impl_->server.stop();
    impl_->pool.wait_idle();
}

const ServiceConfig& ChatService::config() const { return impl_->config; }

std::string ChatService::create_session() { return impl_->sessions.create(); }

PostedMessage ChatService::post_voice_message(const std::string& session_id, std::string_view audio_bytes,
                                              std::string_view format) {
    return impl_->post(session_id, audio_bytes, format);
}

Message ChatService::get_message(const std::string& session_id, const std::string& message_id) const {
    return impl_->sessions.message(session_id, message_id);
}

std::string ChatService::get_audio(const std::string& digest) const { return impl_->blobs.get_bytes(digest); }

std::string ChatService::get_trace_json(const std::string& trace_id) const {
    auto text = impl_->traces.find_canonical(trace_id);
    if (!text) throw Error(Errc::not_found, "trace " + trace_id);
    return *text;
}

void ChatService::wait_idle() { impl_->pool.wait_idle(); }

int ChatService::bind() {
    auto& server = impl_->server;
    const auto& c = impl_->config;
    if (c.port == 0) {
        const int port = server.bind_to_any_port(c.bind_host);
        if (port < 0) throw Error(Errc::io_error, "cannot bind " + c.bind_host);
        return port;
    }
    if (!server.bind_to_port(c.bind_host, c.port)) {
        throw Error(Errc::io_error, "cannot bind " + c.bind_host + ":" + std::to_string(c.port));
    }
    return c.port;
}

void ChatService::listen() { impl_->server.listen_after_bind(); }

void ChatService::stop() { impl_->server.stop(); }

void ChatService::Impl::install_routes() {
    // Multipart framing adds a little on top of the audio itself.
    server.set_payload_max_length(kMaxPayloadBytes + 64 * 1024);
    server.new_task_queue = [n = config.workers] { return new httplib::ThreadPool(std::max<std::size_t>(4, n)); };

    auto guarded = [](auto handler) {
        return [handler](const httplib::Request& req, httplib::Response& res) {
            res.set_header("Access-Control-Allow-Origin", "*");
            try {
                handler(req, res);
            } catch (const Error& e) {
                send_error(res, http_status(e.code()), to_string(e.code()), e.detail());
            } catch (const std::exception& e) {
                send_error(res, 500, "internal", e.what());
            }
        };
    };

    server.Get("/api/health", guarded([](const httplib::Request&, httplib::Response& res) {
        send_json(res, 200, R"({"status":"ok"})");
    }));

    server.Post("/api/sessions", guarded([this](const httplib::Request&, httplib::Response& res) {
        send_json(res, 200, ojson{{"session_id", sessions.create()}}.dump());
    }));

    server.Get(R"(/api/sessions/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
        const Session s = sessions.get(req.matches[1]);
        std::string body = R"({"session_id":)" + ojson(s.id).dump() + R"(,"messages":[)";
        for (std::size_t i = 0; i < s.messages.size(); ++i) {
            body += (i ? "," : "") + message_to_api_json(s.messages[i]);
        }
        send_json(res, 200, body + "]}");
    }));

    server.Post(R"(/api/sessions/([^/]+)/messages)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                    const std::string session_id = req.matches[1];
                    if (!req.is_multipart_form_data() || !req.has_file("audio")) {
                        if (!sessions.contains(session_id)) throw Error(Errc::not_found, "session " + session_id);
                        throw Error(Errc::invalid_argument, "expected multipart form with an 'audio' file");
                    }
                    const auto file = req.get_file_value("audio");
                    std::string format = req.has_file("format") ? req.get_file_value("format").content : "";
                    if (format.empty()) format = file.content_type;
                    const PostedMessage posted = post(session_id, file.content, format);
                    send_json(res, 200,
                              ojson{{"user_message_id", posted.user_message_id},
                                    {"agent_message_id", posted.agent_message_id}}
                                  .dump());
                }));

    server.Get(R"(/api/sessions/([^/]+)/messages/([^/]+))",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, 200, message_to_api_json(sessions.message(req.matches[1], req.matches[2])));
               }));

    server.Get(R"(/api/audio/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
        res.status = 200;
        res.set_content(blobs.get_bytes(req.matches[1]), "audio/wav");
    }));

    server.Get(R"(/api/traces/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
        auto text = traces.find_canonical(req.matches[1]);
        if (!text) throw Error(Errc::not_found, "trace " + std::string(req.matches[1]));
        send_json(res, 200, *text);
    }));

    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (!res.body.empty()) return;
        const char* code = res.status == 413 ? "payload_too_large" : res.status == 404 ? "not_found" : "http_error";
        send_error(res, res.status, code, httplib::status_message(res.status));
    });
}

}  // namespace cha
