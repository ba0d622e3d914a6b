#include "cha/eval/trials.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "cha/error.hpp"
#include "cha/util/url.hpp"
#include "httplib.h"
#include "json.hpp"

namespace cha::eval {

std::string trial_trace_id(std::size_t trial_index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "trial-%06zu", trial_index);
    return buf;
}

std::string trial_session_id(std::size_t trial_index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "eval-session-%06zu", trial_index);
    return buf;
}

InProcessRunner::InProcessRunner(const Pipeline& pipeline, const EvalCorpus& corpus)
    : pipeline_(pipeline), corpus_(corpus) {}

TraceLogEntry InProcessRunner::run(const TrialCell& cell, std::size_t trial_index) {
    RunRequest request;
    request.session_id = trial_session_id(trial_index);
    request.trace_id = trial_trace_id(trial_index);
    request.user_audio = corpus_.audio_for(cell.question_id, cell.emotion);
    request.ground_truth = cell.emotion;
    AgentReply reply = pipeline_.run(request);
    return TraceLogEntry{std::move(reply.trace), std::move(reply.meta)};
}

ServiceRunner::ServiceRunner(std::string base_url, const EvalCorpus& corpus, double poll_timeout_seconds)
    : base_url_(std::move(base_url)), corpus_(corpus), poll_timeout_seconds_(poll_timeout_seconds) {}

namespace {

nlohmann::json expect_json(const httplib::Result& res, const char* what) {
    if (!res) throw Error(Errc::backend_error, std::string(what) + ": " + httplib::to_string(res.error()));
    if (res->status != 200) {
        throw Error(Errc::backend_error, std::string(what) + ": HTTP " + std::to_string(res->status));
    }
    try {
        return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::parse_error&) {
        throw Error(Errc::parse_error, std::string(what) + ": body is not JSON");
    }
}

}  // namespace

TraceLogEntry ServiceRunner::run(const TrialCell& cell, std::size_t /*trial_index*/) {
    const AudioRef audio = corpus_.audio_for(cell.question_id, cell.emotion);
    if (!audio.clip) throw Error(Errc::invalid_argument, "service runs need corpus audio files, not digests");

    httplib::Client client(base_url_);
    client.set_connection_timeout(10);
    client.set_read_timeout(static_cast<time_t>(poll_timeout_seconds_));

    const auto session = expect_json(client.Post("/api/sessions"), "create session");
    const std::string session_id = session.at("session_id").get<std::string>();

    httplib::MultipartFormDataItems items = {
        {"audio", encode_wav(*audio.clip), "question.wav", "audio/wav"},
        {"format", "wav", "", ""},
    };
    const auto posted = expect_json(client.Post("/api/sessions/" + session_id + "/messages", items), "post message");
    const std::string agent_id = posted.at("agent_message_id").get<std::string>();

    const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(poll_timeout_seconds_);
    nlohmann::json message;
    while (true) {
        message = expect_json(client.Get("/api/sessions/" + session_id + "/messages/" + agent_id), "poll message");
        if (message.value("status", "pending") != "pending") break;
        if (std::chrono::steady_clock::now() > deadline) throw Error(Errc::backend_timeout, "agent reply");
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    const std::string trace_id = message.value("trace_id", "");
    if (trace_id.empty()) throw Error(Errc::backend_error, "agent message without trace");

    auto res = client.Get("/api/traces/" + trace_id);
    if (!res || res->status != 200) throw Error(Errc::backend_error, "fetch trace " + trace_id);
    TraceLogEntry entry{parse_trace_json(res->body), {}};
    entry.trace.query_emotion_ground_truth = cell.emotion;
    return entry;
}

std::vector<TraceLogEntry> run_trials(const EvalCorpus& corpus, std::size_t n, std::uint64_t seed,
                                      TrialRunner& runner, std::size_t parallel) {
    (void)corpus;
    const std::vector<TrialCell> cells = draw_cells(n, seed);
    std::vector<TraceLogEntry> out(n);

    auto run_one = [&](std::size_t i) {
        try {
            out[i] = runner.run(cells[i], i);
        } catch (const std::exception& e) {
            TraceRecord t;
            t.trace_id = trial_trace_id(i);
            t.session_id = trial_session_id(i);
            t.query_emotion_ground_truth = cells[i].emotion;
            t.outcome = Outcome{OutcomeKind::failed, "runner"};
            t.plan.raw_planner_output = e.what();
            out[i] = TraceLogEntry{std::move(t), {}};
        }
    };

    parallel = std::max<std::size_t>(1, std::min(parallel, n));
    if (parallel == 1) {
        for (std::size_t i = 0; i < n; ++i) run_one(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (std::size_t w = 0; w < parallel; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) run_one(i);
        });
    }
    for (auto& t : workers) t.join();
    return out;
}

void write_trace_set(const std::filesystem::path& path, const std::vector<TraceLogEntry>& entries) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
    for (const auto& e : entries) out << trace_log_line(e.trace, e.meta) << '\n';
    if (!out) throw Error(Errc::io_error, "write failed: " + path.string());
}

std::vector<TraceLogEntry> read_trace_set(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot read " + path.string());
    std::vector<TraceLogEntry> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(parse_trace_log_line(line));
    }
    return out;
}

}  // namespace cha::eval
