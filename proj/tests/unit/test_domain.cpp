#include <gtest/gtest.h>

#include "cha/domain/audio.hpp"
#include "cha/domain/emotion.hpp"
#include "cha/domain/plan.hpp"
#include "cha/domain/trace.hpp"
#include "cha/error.hpp"
#include "generators.hpp"

namespace cha {
namespace {

TEST(Emotion, ParsesCaseInsensitiveTrimmed) {
    EXPECT_EQ(parse_emotion(" SAD\n"), EmotionLabel::sad);
    EXPECT_EQ(parse_emotion("Happy"), EmotionLabel::happy);
    EXPECT_FALSE(try_parse_emotion("joyful"));
    try {
        parse_emotion("joyful");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::unknown_emotion);
    }
    for (auto e : kAllEmotions) EXPECT_EQ(parse_emotion(to_string(e)), e);
}

// Digests from Python: sha256(struct.pack('>Q', rate) + struct.pack('<3h', 1, -2, 32767)).
TEST(AudioFingerprint, MatchesIndependentHash) {
    EXPECT_EQ(fingerprint_audio(AudioClip{}), "603616f91d9c87a5b515abc5a9a1b368df213c9a924abec0195f513b8998fe30");
    AudioClip clip{{1, -2, 32767}, 16000, 1};
    EXPECT_EQ(fingerprint_audio(clip), "e65def13df9b84bc4d7b2b864b96e88264c400014243ad114387673ff48ecf4e");
    clip.sample_rate = 8000;
    EXPECT_EQ(fingerprint_audio(clip), "114288a91844991feebf9c22893550be397c8338be866b56408c868953b92c0d");
}

TEST(AudioWav, RoundTripsCanonicalClips) {
    test::Rng rng(21);
    for (int i = 0; i < 30; ++i) {
        AudioClip clip;
        clip.samples.resize(rng.below(2000));
        for (auto& s : clip.samples) s = static_cast<std::int16_t>(static_cast<int>(rng.below(65536)) - 32768);
        const std::string wav = encode_wav(clip);
        EXPECT_EQ(wav.size(), 44 + 2 * clip.samples.size());
        EXPECT_EQ(decode_wav(wav), clip);
    }
}

TEST(AudioWav, RejectsGarbage) {
    try {
        decode_wav("RIFF....WAVEnope");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::decode_error);
    }
}

TEST(AudioCanonicalize, DownmixesAndResamples) {
    AudioClip stereo;
    stereo.sample_rate = 32000;
    stereo.channels = 2;
    for (int i = 0; i < 3200; ++i) {
        stereo.samples.push_back(1000);
        stereo.samples.push_back(3000);
    }
    const AudioClip c = canonicalize(stereo);
    EXPECT_TRUE(c.is_canonical());
    EXPECT_NEAR(static_cast<double>(c.frame_count()), 1600.0, 1.0);
    for (auto s : c.samples) EXPECT_EQ(s, 2000);
    EXPECT_NEAR(c.duration_seconds(), 0.1, 1e-3);
}

TEST(AudioRef, DigestIsFingerprint) {
    const AudioClip tone = make_tone(220, 0.25);
    const AudioRef ref = AudioRef::of(tone);
    EXPECT_EQ(ref.digest, fingerprint_audio(tone));
    EXPECT_EQ(ref.clip->samples.size(), 4000u);
}

TEST(Bindings, ReferenceForms) {
    EXPECT_EQ(parse_binding("$query")->kind, InputBinding::Kind::query_ref);
    EXPECT_EQ(parse_binding("$audio")->kind, InputBinding::Kind::audio_ref);
    EXPECT_EQ(parse_binding("$step12.hits")->kind, InputBinding::Kind::memory_ref);
    EXPECT_EQ(parse_binding("plain text")->kind, InputBinding::Kind::literal);
    EXPECT_EQ(parse_binding("")->kind, InputBinding::Kind::literal);
    for (const char* bad : {"$step0.x", "$step01.x", "$step1", "$step1.", "$stepx.y", "$foo", "$step1.9x"}) {
        EXPECT_FALSE(parse_binding(bad)) << bad;
    }
    const auto path = parse_memory_path("$step3.emotion");
    ASSERT_TRUE(path);
    EXPECT_EQ(path->step, 3);
    EXPECT_EQ(path->key(), "step3.emotion");
}

TEST(TraceJson, RandomTracesRoundTripCanonically) {
    test::Rng rng(99);
    for (int i = 0; i < 300; ++i) {
        TraceRecord t = test::random_trace(rng);
        if (rng.chance(50)) t.detected_emotion = EmotionLabel::angry;
        if (rng.chance(50)) t.response_audio_ref = std::string(64, 'a');
        t.memory.push_back(MemoryRecord{"step1.hits", "web_search", 10,
                                        SearchHits{{"T", "https://example.org/a", "snip\n\"x\""}}});
        t.memory.push_back(MemoryRecord{"step2.confidence", "speech_emotion_recognition", 8, 0.75});
        const std::string json = canonical_trace_json(t);
        const TraceRecord back = parse_trace_json(json);
        EXPECT_EQ(back, t);
        EXPECT_EQ(canonical_trace_json(back), json);
    }
}

TEST(TraceLog, LineKeepsCanonicalPartVerbatim) {
    test::Rng rng(4);
    const TraceRecord t = test::random_trace(rng);
    TraceMeta meta;
    meta.recorded_at_ms = 1700000000000;
    meta.step_latency_ms = {1.5, 2.0};
    meta.total_latency_ms = 12.25;
    const std::string line = trace_log_line(t, meta);
    EXPECT_EQ(line.find('\n'), std::string::npos);
    EXPECT_EQ(canonical_part_of_log_line(line), canonical_trace_json(t));
    const auto entry = parse_trace_log_line(line);
    EXPECT_EQ(entry.trace, t);
    EXPECT_EQ(entry.meta.recorded_at_ms, meta.recorded_at_ms);
    EXPECT_EQ(entry.meta.step_latency_ms, meta.step_latency_ms);
}

}  // namespace
}  // namespace cha
