#include <gtest/gtest.h>

#include <fstream>
#include <thread>

#include "cha/error.hpp"
#include "cha/service/chat_service.hpp"
#include "cha/service/config.hpp"
#include "cha/service/ingest.hpp"
#include "cha/service/opus.hpp"
#include "cha/service/store.hpp"
#include "fixturegen.hpp"
#include "httplib.h"
#include "json.hpp"
#include "temp_dir.hpp"

namespace cha {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

Errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return Errc::invalid_argument;
}

std::string cell_wav(int q, EmotionLabel e) { return encode_wav(fixturegen::cell_clip(q, e)); }

ServiceConfig test_config(const fs::path& data) {
    ServiceConfig c = default_service_config();
    c.data_dir = data;
    c.port = 0;
    c.workers = 2;
    return c;
}

TEST(Formats, NamesAndMimeTypes) {
    EXPECT_EQ(parse_audio_format("wav"), AudioFormat::wav);
    EXPECT_EQ(parse_audio_format("audio/wav"), AudioFormat::wav);
    EXPECT_EQ(parse_audio_format("ogg-opus"), AudioFormat::ogg_opus);
    EXPECT_EQ(parse_audio_format("audio/ogg;codecs=opus"), AudioFormat::ogg_opus);
    EXPECT_EQ(parse_audio_format("audio/webm; codecs=\"opus\""), AudioFormat::webm_opus);
    EXPECT_FALSE(parse_audio_format("audio/mp3"));
}

TEST(Ingest, CanonicalizesWav) {
    AudioClip stereo44{std::vector<std::int16_t>(44100 * 2, 100), 44100, 2};
    const AudioClip c = ingest_audio(encode_wav(stereo44), AudioFormat::wav);
    EXPECT_TRUE(c.is_canonical());
    EXPECT_NEAR(c.duration_seconds(), 1.0, 1e-3);
}

TEST(Ingest, Limits) {
    EXPECT_EQ(code_of([] { ingest_audio(std::string(kMaxPayloadBytes + 1, 'x'), AudioFormat::wav); }),
              Errc::payload_too_large);
    const AudioClip long_clip{std::vector<std::int16_t>(8000 * 121, 0), 8000, 1};
    EXPECT_EQ(code_of([&] { ingest_audio(encode_wav(long_clip), AudioFormat::wav); }), Errc::payload_too_large);
    EXPECT_EQ(code_of([] { ingest_audio("not audio", AudioFormat::wav); }), Errc::decode_error);
    EXPECT_EQ(code_of([] { ingest_audio("not audio", AudioFormat::ogg_opus); }), Errc::decode_error);
}

class Opus : public ::testing::Test {
protected:
    void SetUp() override {
        if (!opus_available()) GTEST_SKIP() << "libopus not loadable";
    }
};

double correlation(const AudioClip& a, const AudioClip& b, std::size_t skip) {
    double ab = 0, aa = 0, bb = 0;
    const std::size_t n = std::min(a.samples.size(), b.samples.size());
    for (std::size_t i = skip; i + skip < n; ++i) {
        ab += double(a.samples[i]) * b.samples[i];
        aa += double(a.samples[i]) * a.samples[i];
        bb += double(b.samples[i]) * b.samples[i];
    }
    return ab / std::sqrt(aa * bb);
}

TEST_F(Opus, OggRoundTrip) {
    const AudioClip tone = make_tone(440, 1.0);
    const AudioClip back = ingest_audio(encode_ogg_opus(tone), AudioFormat::ogg_opus);
    EXPECT_TRUE(back.is_canonical());
    EXPECT_NEAR(back.duration_seconds(), 1.0, 0.03);
    EXPECT_GT(correlation(tone, back, 800), 0.9);
}

TEST_F(Opus, WebmRoundTrip) {
    const AudioClip tone = make_tone(330, 0.8);
    const AudioClip back = ingest_audio(encode_webm_opus(tone), AudioFormat::webm_opus);
    EXPECT_TRUE(back.is_canonical());
    EXPECT_NEAR(back.duration_seconds(), 0.8, 0.05);
    EXPECT_GT(correlation(tone, back, 800), 0.9);
}

TEST_F(Opus, CorruptedOggIsRejected) {
    std::string ogg = encode_ogg_opus(make_tone(440, 0.3));
    ogg[ogg.size() / 2] ^= 0x5a;  // breaks a page checksum
    EXPECT_EQ(code_of([&] { decode_ogg_opus(ogg); }), Errc::decode_error);
    EXPECT_EQ(code_of([&] { decode_webm_opus(ogg); }), Errc::decode_error);
}

TEST(BlobStore, ContentAddressed) {
    test::TempDir dir;
    BlobStore blobs(dir / "audio");
    const AudioClip tone = make_tone(250, 0.2);
    const std::string d = blobs.put(tone);
    EXPECT_EQ(d, fingerprint_audio(tone));
    EXPECT_EQ(blobs.put(tone), d);
    EXPECT_TRUE(blobs.contains(d));
    EXPECT_EQ(blobs.get_bytes(d), encode_wav(tone));
    EXPECT_EQ(*blobs.load(d).clip, tone);
    EXPECT_EQ(code_of([&] { blobs.get_bytes(std::string(64, 'f')); }), Errc::not_found);
    EXPECT_EQ(code_of([&] { blobs.get_bytes("../../etc/passwd"); }), Errc::not_found);
}

TEST(SessionStore, PersistsAndRecoversPending) {
    test::TempDir dir;
    std::string sid;
    std::string agent_id;
    {
        SessionStore store(dir / "sessions");
        sid = store.create();
        Message u;
        u.role = Role::user;
        u.transcript = "hi";
        const Message su = store.append(sid, u);
        EXPECT_EQ(su.created_seq, 0u);
        Message a;
        a.role = Role::agent;
        a.status = MessageStatus::pending;
        a.reply_to = su.id;
        const Message sa = store.append(sid, a);
        EXPECT_EQ(sa.created_seq, 1u);
        agent_id = sa.id;
        EXPECT_EQ(code_of([&] { store.append("nope", u); }), Errc::not_found);
    }
    std::ofstream(dir / "sessions" / (sid + ".json.tmp-123")) << "{";
    SessionStore reopened(dir / "sessions");
    const Message a = reopened.message(sid, agent_id);
    EXPECT_EQ(a.status, MessageStatus::failed);
    EXPECT_EQ(a.failure_reason, "interrupted");
    EXPECT_EQ(reopened.get(sid).messages.size(), 2u);
    EXPECT_FALSE(fs::exists(dir / "sessions" / (sid + ".json.tmp-123")));
    const Session s = reopened.get(sid);
    EXPECT_EQ(session_from_json(session_to_json(s)), s);
}

TEST(TraceLog, AppendFindAndTornTail) {
    test::TempDir dir;
    TraceRecord t;
    t.trace_id = "abc";
    t.query_text = "q";
    {
        TraceLog log(dir / "traces.jsonl");
        log.append(t, TraceMeta{});
        EXPECT_EQ(log.find("abc"), t);
        EXPECT_EQ(*log.find_canonical("abc"), canonical_trace_json(t));
    }
    {
        std::ofstream out(dir / "traces.jsonl", std::ios::app | std::ios::binary);
        out << R"({"trace":{"trace_id":"torn","sess)";
    }
    TraceLog log(dir / "traces.jsonl");
    EXPECT_EQ(log.size(), 1u);
    EXPECT_EQ(log.skipped_lines(), 1u);
    TraceRecord t2 = t;
    t2.trace_id = "def";
    log.append(t2, TraceMeta{});
    TraceLog again(dir / "traces.jsonl");
    EXPECT_EQ(again.size(), 2u);
    EXPECT_TRUE(again.find("def"));
    EXPECT_FALSE(again.find("torn"));
}

TEST(Config, ParsesOverlayAndBind) {
    test::TempDir dir;
    std::ofstream(dir / "c.json") << R"({
        "bind": "0.0.0.0:9001", "data_dir": "state", "workers": 3, "top_k": 2,
        "tools": {"web_search": {"backend": "serpapi", "endpoint": "default", "timeout_seconds": 5}},
        "planner_lm": {"backend": "http", "endpoint": "http://127.0.0.1:1/v1/chat/completions", "model": "m"}
    })";
    const ServiceConfig c = load_service_config(dir / "c.json");
    EXPECT_EQ(c.bind_host, "0.0.0.0");
    EXPECT_EQ(c.port, 9001);
    EXPECT_EQ(c.data_dir, dir / "state");
    EXPECT_EQ(c.workers, 3u);
    EXPECT_EQ(c.limits.top_k, 2u);
    EXPECT_EQ(c.planner_lm.kind, LmConfig::Kind::http);
    const auto& ws = *std::find_if(c.tools.begin(), c.tools.end(), [](auto& s) { return s.name == "web_search"; });
    EXPECT_EQ(ws.backend.kind, BackendRef::Kind::serpapi);

    ServiceConfig m = c;
    force_mock_backends(m);
    for (const auto& s : m.tools) EXPECT_EQ(s.backend.kind, BackendRef::Kind::mock);
    EXPECT_EQ(m.planner_lm.kind, LmConfig::Kind::scripted);

    apply_bind(m, ":7000");
    EXPECT_EQ(m.port, 7000);
    EXPECT_EQ(code_of([] { parse_service_config("{\"workers\": \"many\"}"); }), Errc::config_error);
    EXPECT_EQ(code_of([] { parse_service_config("{\"tools\": {\"teleport\": {}}}"); }), Errc::config_error);
    EXPECT_EQ(code_of([&] { apply_bind(m, "host:notaport"); }), Errc::config_error);
}

TEST(ChatService, InProcessVoiceRoundTrip) {
    test::TempDir dir;
    ChatService svc(test_config(dir.path()));
    const std::string sid = svc.create_session();
    const auto posted = svc.post_voice_message(sid, cell_wav(1, EmotionLabel::sad), "wav");
    svc.wait_idle();
    const Message user = svc.get_message(sid, posted.user_message_id);
    const Message agent = svc.get_message(sid, posted.agent_message_id);
    EXPECT_EQ(user.transcript, fixturegen::questions()[0].text);
    EXPECT_EQ(agent.status, MessageStatus::completed);
    EXPECT_EQ(agent.reply_to, user.id);
    EXPECT_NE(agent.transcript.find(fixturegen::support_resource_text()), std::string::npos);
    ASSERT_TRUE(agent.audio_ref);
    EXPECT_EQ(decode_wav(svc.get_audio(*agent.audio_ref)).sample_rate, 16000u);
    const TraceRecord t = parse_trace_json(svc.get_trace_json(agent.trace_id));
    EXPECT_EQ(t.detected_emotion, EmotionLabel::sad);
    EXPECT_EQ(t.user_audio_ref, *user.audio_ref);

    EXPECT_EQ(code_of([&] { svc.post_voice_message("missing", cell_wav(1, EmotionLabel::sad), "wav"); }),
              Errc::not_found);
    EXPECT_EQ(code_of([&] { svc.post_voice_message(sid, "x", "audio/mp3"); }), Errc::unsupported_format);
}

TEST(ChatService, UnscriptedAudioFailsAtStt) {
    test::TempDir dir;
    ChatService svc(test_config(dir.path()));
    const std::string sid = svc.create_session();
    const auto posted = svc.post_voice_message(sid, encode_wav(make_tone(1234, 0.5)), "wav");
    svc.wait_idle();
    const Message agent = svc.get_message(sid, posted.agent_message_id);
    EXPECT_EQ(agent.status, MessageStatus::failed);
    EXPECT_EQ(agent.failure_reason, "stt");
}

class HttpApi : public ::testing::Test {
protected:
    void SetUp() override {
        svc_ = std::make_unique<ChatService>(test_config(dir_.path()));
        port_ = svc_->bind();
        thread_ = std::thread([this] { svc_->listen(); });
        client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
        for (int i = 0; i < 100 && !client_->Get("/api/health"); ++i) {
            std::this_thread::sleep_for(std::chrono::milliseconds(10));
        }
    }
    void TearDown() override {
        svc_->stop();
        thread_.join();
    }

    httplib::Result post_audio(const std::string& sid, const std::string& bytes, const std::string& format,
                               const std::string& content_type = "application/octet-stream") {
        httplib::MultipartFormDataItems items = {{"audio", bytes, "clip", content_type}};
        if (!format.empty()) items.push_back({"format", format, "", ""});
        return client_->Post("/api/sessions/" + sid + "/messages", items);
    }

    json wait_done(const std::string& sid, const std::string& mid) {
        for (int i = 0; i < 500; ++i) {
            auto r = client_->Get("/api/sessions/" + sid + "/messages/" + mid);
            json j = json::parse(r->body);
            if (j.at("status") != "pending") return j;
            std::this_thread::sleep_for(std::chrono::milliseconds(10));
        }
        ADD_FAILURE() << "message never finished";
        return {};
    }

    test::TempDir dir_;
    std::unique_ptr<ChatService> svc_;
    int port_ = 0;
    std::thread thread_;
    std::unique_ptr<httplib::Client> client_;
};

TEST_F(HttpApi, HappyPath) {
    auto health = client_->Get("/api/health");
    ASSERT_TRUE(health);
    EXPECT_EQ(health->status, 200);
    EXPECT_EQ(health->get_header_value("Access-Control-Allow-Origin"), "*");

    auto created = client_->Post("/api/sessions");
    ASSERT_EQ(created->status, 200);
    const std::string sid = json::parse(created->body).at("session_id");

    auto posted = post_audio(sid, cell_wav(2, EmotionLabel::angry), "", "audio/wav");
    ASSERT_EQ(posted->status, 200) << posted->body;
    const json ids = json::parse(posted->body);
    const json agent = wait_done(sid, ids.at("agent_message_id"));
    EXPECT_EQ(agent.at("status"), "completed");
    EXPECT_EQ(agent.at("role"), "agent");
    const std::string audio_url = agent.at("audio_url");
    auto audio = client_->Get(audio_url);
    EXPECT_EQ(audio->status, 200);
    EXPECT_EQ(audio->get_header_value("Content-Type"), "audio/wav");
    auto trace = client_->Get("/api/traces/" + agent.at("trace_id").get<std::string>());
    EXPECT_EQ(trace->status, 200);
    EXPECT_EQ(parse_trace_json(trace->body).detected_emotion, EmotionLabel::angry);

    auto session = client_->Get("/api/sessions/" + sid);
    EXPECT_EQ(json::parse(session->body).at("messages").size(), 2u);
}

TEST_F(HttpApi, ErrorMapping) {
    const std::string sid = json::parse(client_->Post("/api/sessions")->body).at("session_id");
    auto missing = post_audio("nope", cell_wav(1, EmotionLabel::happy), "wav");
    EXPECT_EQ(missing->status, 404);
    EXPECT_EQ(json::parse(missing->body).at("error"), "not_found");
    auto mp3 = post_audio(sid, "ID3...", "audio/mpeg");
    EXPECT_EQ(mp3->status, 415);
    auto junk = post_audio(sid, "RIFFjunk", "wav");
    EXPECT_EQ(junk->status, 400);
    EXPECT_EQ(json::parse(junk->body).at("error"), "decode_error");
    auto big = post_audio(sid, std::string(kMaxPayloadBytes + 1024, 'x'), "wav");
    ASSERT_TRUE(big);
    EXPECT_EQ(big->status, 413);
    EXPECT_EQ(client_->Get("/api/audio/" + std::string(64, '0'))->status, 404);
    EXPECT_EQ(client_->Get("/api/traces/unknown")->status, 404);
    EXPECT_EQ(client_->Get("/api/sessions/" + sid + "/messages/m-none")->status, 404);
}

TEST(ChatServiceRestart, StateSurvivesNewProcessObject) {
    test::TempDir dir;
    std::string sid, agent_id, trace;
    {
        ChatService svc(test_config(dir.path()));
        sid = svc.create_session();
        agent_id = svc.post_voice_message(sid, cell_wav(5, EmotionLabel::happy), "wav").agent_message_id;
        svc.wait_idle();
        trace = svc.get_trace_json(svc.get_message(sid, agent_id).trace_id);
    }
    ChatService again(test_config(dir.path()));
    const Message agent = again.get_message(sid, agent_id);
    EXPECT_EQ(agent.status, MessageStatus::completed);
    EXPECT_EQ(again.get_trace_json(agent.trace_id), trace);
    EXPECT_FALSE(again.get_audio(*agent.audio_ref).empty());
}

}  // namespace
}  // namespace cha
