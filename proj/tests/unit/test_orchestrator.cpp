#include <gtest/gtest.h>

#include <mutex>

#include "cha/error.hpp"
#include "cha/orchestrator/executor.hpp"
#include "cha/orchestrator/memory.hpp"
#include "cha/orchestrator/pipeline.hpp"
#include "cha/orchestrator/response.hpp"
#include "cha/tools/standard_tools.hpp"
#include "cha/util/text.hpp"
#include "fake_lm.hpp"
#include "fixturegen.hpp"

namespace cha {
namespace {

struct Harness {
    fixturegen::Bundle bundle = fixturegen::generate();
    ToolRegistry registry;

    explicit Harness(std::vector<ToolSpec> specs = tools::standard_tool_specs()) {
        BackendEnv env;
        env.fixture_sets["bundled"] = std::make_shared<FixtureSet>(bundle.tools);
        registry = make_standard_registry(specs, env);
    }
};

struct CollectingSink : TraceSink {
    std::mutex m;
    std::vector<TraceRecord> traces;
    void append(const TraceRecord& t, const TraceMeta&) override {
        std::lock_guard lock(m);
        traces.push_back(t);
    }
};

RunRequest request_for(int q, EmotionLabel e) {
    return RunRequest{"s1", "t1", AudioRef::of(fixturegen::cell_clip(q, e)), e};
}

TEST(Memory, WriteOnceOrderedAndSummarized) {
    ShortTermMemory m;
    m.insert("step1.emotion", EmotionLabel::sad, "speech_emotion_recognition");
    m.insert("step2.hits", SearchHits{{"T", "https://example.org", "s"}}, "web_search");
    try {
        m.insert("step1.emotion", EmotionLabel::happy, "x");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::duplicate_memory_key);
    }
    try {
        m.at("step9.x");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::missing_memory_key);
    }
    EXPECT_EQ(m.first_emotion(), EmotionLabel::sad);
    EXPECT_EQ(m.summary().rfind("step1.emotion (speech_emotion_recognition): sad\n", 0), 0u);
    const auto back = ShortTermMemory::from_records(m.to_records());
    EXPECT_EQ(back.summary(), m.summary());
}

TEST(Executor, ResolvesReferences) {
    ShortTermMemory m;
    m.insert("step1.emotion", EmotionLabel::angry, "speech_emotion_recognition");
    TaskInvocation inv{2, "web_search", {{"query", InputBinding::query()}, {"emotion", InputBinding::memory(1, "emotion")}}};
    const AudioRef audio = AudioRef::of(make_tone(200, 0.1));
    const ValueMap v = resolve_inputs(inv, "q?", audio, m);
    EXPECT_EQ(std::get<std::string>(v.at("query")), "q?");
    EXPECT_EQ(std::get<EmotionLabel>(v.at("emotion")), EmotionLabel::angry);
    inv.inputs["emotion"] = InputBinding::memory(1, "confidence");
    EXPECT_THROW(resolve_inputs(inv, "q", audio, m), Error);
}

TEST(Executor, RunsScriptedPlanIntoMemory) {
    Harness h;
    const auto& q = fixturegen::questions()[0];
    Plan plan;
    plan.chosen = fixturegen::scripted_plan(q);
    ShortTermMemory m;
    const AudioRef audio = AudioRef::of(fixturegen::cell_clip(q.id, EmotionLabel::sad));
    const ExecutionLog log = execute_plan(plan, q.text, audio, h.registry, m);
    ASSERT_FALSE(log.failed) << log.steps.back().error_message;
    EXPECT_EQ(log.steps.size(), plan.chosen.size());
    EXPECT_EQ(log.latency_ms.size(), plan.chosen.size());
    EXPECT_EQ(std::get<EmotionLabel>(m.at("step1.emotion")), EmotionLabel::sad);
    for (const auto& s : log.steps) {
        EXPECT_EQ(s.inputs_digest.size(), 64u);
        EXPECT_EQ(s.output_digest.size(), 64u);
    }
}

TEST(Executor, HaltsAtFirstFailure) {
    Harness h;
    Plan plan;
    plan.chosen = {
        {1, "web_search", {{"query", InputBinding::literal("nothing scripted for this")}}},
        {2, "extract_text", {{"url", InputBinding::memory(1, "hits")}}},
    };
    ShortTermMemory m;
    const ExecutionLog log = execute_plan(plan, "q", AudioRef::of(make_tone(200, 0.1)), h.registry, m);
    EXPECT_TRUE(log.failed);
    ASSERT_EQ(log.steps.size(), 1u);
    EXPECT_EQ(log.steps[0].status, StepStatus::error);
    EXPECT_EQ(log.steps[0].error_code, "no_fixture");
    EXPECT_TRUE(log.steps[0].output_digest.empty());
    EXPECT_TRUE(m.empty());
}

TEST(ResponsePrompt, EmotionLineAndTone) {
    ShortTermMemory m;
    LmRequest none = build_response_prompt("q", m);
    EXPECT_NE(none.user_text.find("EMOTION: unknown"), std::string::npos);
    EXPECT_NE(none.user_text.find("SOURCES: (none)"), std::string::npos);
    m.insert("step1.emotion", EmotionLabel::sad, "speech_emotion_recognition");
    const LmRequest sad = build_response_prompt("q", m);
    EXPECT_NE(sad.user_text.find("EMOTION: sad"), std::string::npos);
    EXPECT_NE(sad.system_text.find("sad"), std::string::npos);
    EXPECT_NE(sad.system_text, none.system_text);
}

TEST(ResponsePrompt, SourcesRespectCharBudget) {
    ShortTermMemory m;
    m.insert("step1.content", std::string(5000, 'a') + " tail", "extract_text");
    m.insert("step2.content", std::string("second source"), "extract_text");
    const LmRequest r = build_response_prompt("q", m, 100);
    std::size_t source_chars = 0;
    const auto at = r.user_text.find("SOURCES:\n");
    ASSERT_NE(at, std::string::npos);
    for (char c : r.user_text.substr(at + 9)) source_chars += c == 'a' || c == 's';
    EXPECT_LE(source_chars, 100u);
    EXPECT_EQ(r.user_text.find("second source"), std::string::npos);
}

TEST(ResponseGen, EmptyCompletionIsAnError) {
    test::QueueLm lm({"   \n", "  fine  "});
    try {
        generate_response(LmRequest{}, lm);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::empty_completion);
    }
    EXPECT_EQ(generate_response(LmRequest{}, lm), "fine");
}

TEST(Pipeline, SadQuestionOneEndToEnd) {
    Harness h;
    CollectingSink sink;
    Pipeline p(h.registry, h.bundle.lm, h.bundle.lm, &sink);
    const AgentReply reply = p.run(request_for(1, EmotionLabel::sad));
    const TraceRecord& t = reply.trace;
    EXPECT_EQ(t.outcome.kind, OutcomeKind::completed);
    EXPECT_EQ(t.query_text, fixturegen::questions()[0].text);
    EXPECT_EQ(t.detected_emotion, EmotionLabel::sad);
    EXPECT_EQ(t.response_prompt_emotion, EmotionLabel::sad);
    EXPECT_TRUE(t.search_performed);
    EXPECT_NE(reply.response_text.find(fixturegen::support_resource_text()), std::string::npos);
    ASSERT_TRUE(reply.response_audio);
    EXPECT_EQ(t.response_audio_ref, reply.response_audio->digest);
    EXPECT_EQ(t.plan.strategies_considered.size(), 3u);
    ASSERT_EQ(sink.traces.size(), 1u);
    EXPECT_EQ(sink.traces[0], t);
}

TEST(Pipeline, RepeatRunsAreCanonicallyIdentical) {
    Harness h;
    Pipeline p(h.registry, h.bundle.lm, h.bundle.lm, nullptr);
    for (int q = 1; q <= 5; ++q) {
        for (auto e : kCorpusEmotions) {
            const auto a = p.run(request_for(q, e));
            const auto b = p.run(request_for(q, e));
            EXPECT_EQ(a.trace.outcome.kind, OutcomeKind::completed) << q;
            EXPECT_EQ(canonical_trace_json(a.trace), canonical_trace_json(b.trace));
        }
    }
}

TEST(Pipeline, UnknownAudioFailsAtStt) {
    Harness h;
    Pipeline p(h.registry, h.bundle.lm, h.bundle.lm, nullptr);
    RunRequest r{"s", "t", AudioRef::of(make_tone(999, 0.3)), std::nullopt};
    const auto reply = p.run(r);
    EXPECT_EQ(reply.trace.outcome, (Outcome{OutcomeKind::failed, "stt"}));
    EXPECT_FALSE(reply.response_audio);
}

TEST(Pipeline, PlannerGarbageFailsPlanningAfterRetry) {
    Harness h;
    test::QueueLm planner({"no plan", "still no plan"});
    Pipeline p(h.registry, planner, h.bundle.lm, nullptr);
    const auto reply = p.run(request_for(2, EmotionLabel::happy));
    EXPECT_EQ(reply.trace.outcome, (Outcome{OutcomeKind::failed, "planning"}));
    EXPECT_EQ(reply.trace.plan.retry_count, 1);
    EXPECT_EQ(reply.trace.plan.raw_planner_output, "still no plan");
}

TEST(Pipeline, ToolFailureFailsExecution) {
    Harness h;
    test::QueueLm planner(
        {"```FINAL_PLAN\n[{\"step\":1,\"task\":\"web_search\",\"inputs\":{\"query\":\"unscripted\"}}]\n```"});
    Pipeline p(h.registry, planner, h.bundle.lm, nullptr);
    const auto reply = p.run(request_for(2, EmotionLabel::happy));
    EXPECT_EQ(reply.trace.outcome, (Outcome{OutcomeKind::failed, "execution"}));
    EXPECT_EQ(reply.trace.executed.size(), 1u);
}

TEST(Pipeline, ResponderFailureFailsResponse) {
    Harness h;
    test::QueueLm responder({"  "});
    Pipeline p(h.registry, h.bundle.lm, responder, nullptr);
    const auto reply = p.run(request_for(3, EmotionLabel::angry));
    EXPECT_EQ(reply.trace.outcome, (Outcome{OutcomeKind::failed, "response"}));
    EXPECT_TRUE(reply.trace.search_performed);
}

TEST(Pipeline, SpeechSynthesisFailureKeepsText) {
    auto specs = tools::standard_tool_specs();
    specs[4].backend = BackendRef{BackendRef::Kind::http, "http://127.0.0.1:9", 0.5, 0};
    Harness h(specs);
    Pipeline p(h.registry, h.bundle.lm, h.bundle.lm, nullptr);
    const auto reply = p.run(request_for(4, EmotionLabel::sad));
    EXPECT_EQ(reply.trace.outcome, (Outcome{OutcomeKind::completed_text_only, "tts"}));
    EXPECT_FALSE(reply.response_text.empty());
    EXPECT_FALSE(reply.response_audio);
}

}  // namespace
}  // namespace cha
