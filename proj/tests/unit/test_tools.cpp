#include <gtest/gtest.h>

#include "cha/error.hpp"
#include "cha/tools/backends.hpp"
#include "cha/tools/standard_tools.hpp"
#include "cha/util/text.hpp"
#include "json.hpp"
#include "stub_server.hpp"

namespace cha {
namespace {

using json = nlohmann::json;

Errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return Errc::invalid_argument;
}

std::shared_ptr<FixtureSet> sample_fixtures() {
    auto fx = std::make_shared<FixtureSet>();
    json hits = json::array();
    for (int i = 0; i < 8; ++i) {
        hits.push_back({{"title", "T" + std::to_string(i)},
                        {"url", "https://example.org/" + std::to_string(i)},
                        {"snippet", "s"}});
    }
    fx->add("web_search", "coping with stress", json{{"hits", hits}}.dump());
    fx->add("web_search", "coping with stress | user emotional state: sad",
            json{{"hits", json::array({hits[3]})}}.dump());
    fx->add("extract_text", "https://example.org/0", json{{"content", "one two three four five six"}}.dump());
    return fx;
}

ToolRegistry mock_registry(std::shared_ptr<FixtureSet> fx, ToolLimits limits = {}) {
    BackendEnv env;
    env.fixture_sets["bundled"] = std::move(fx);
    return make_standard_registry(tools::standard_tool_specs(), env, limits);
}

TEST(Registry, RejectsDuplicatesAndLateRegistration) {
    auto fx = sample_fixtures();
    ToolRegistry r;
    const auto specs = tools::standard_tool_specs();
    r.register_tool(specs[0], std::make_shared<MockBackend>(fx));
    EXPECT_EQ(code_of([&] { r.register_tool(specs[0], std::make_shared<MockBackend>(fx)); }), Errc::duplicate_name);
    r.freeze();
    EXPECT_EQ(code_of([&] { r.register_tool(specs[1], std::make_shared<MockBackend>(fx)); }), Errc::registry_frozen);
    EXPECT_EQ(code_of([&] { r.at("nope"); }), Errc::unknown_tool);
}

TEST(Registry, DescriptionsListEveryTool) {
    const auto r = mock_registry(sample_fixtures());
    const std::string d = tool_descriptions(r);
    for (const auto* spec : r.specs()) EXPECT_NE(d.find("TOOL: " + spec->name), std::string::npos);
    EXPECT_NE(d.find("emotion: emotion (optional)"), std::string::npos);
}

TEST(InvokeTool, SchemaViolations) {
    const auto r = mock_registry(sample_fixtures());
    EXPECT_EQ(code_of([&] { invoke_tool(r, "web_search", {}); }), Errc::schema_violation);
    EXPECT_EQ(code_of([&] { invoke_tool(r, "web_search", {{"query", 3.0}}); }), Errc::schema_violation);
    EXPECT_EQ(code_of([&] { invoke_tool(r, "web_search", {{"query", std::string("x")}, {"bogus", std::string("y")}}); }),
              Errc::schema_violation);
    EXPECT_EQ(code_of([&] { invoke_tool(r, "extract_text", {{"url", SearchHits{}}}); }), Errc::schema_violation);
    EXPECT_EQ(code_of([&] { invoke_tool(r, "web_search", {{"query", std::string("unknown")}}); }), Errc::no_fixture);
}

TEST(InvokeTool, SearchKeepsTopK) {
    const auto r = mock_registry(sample_fixtures(), ToolLimits{3, 4000});
    const auto res = invoke_tool(r, "web_search", {{"query", std::string("coping  with stress")}});
    EXPECT_EQ(std::get<SearchHits>(res.outputs.at("hits")).size(), 3u);
}

TEST(InvokeTool, EmotionIsFoldedIntoTheQuery) {
    EXPECT_EQ(tools::compose_search_query("q", EmotionLabel::angry), "q | user emotional state: angry");
    const auto r = mock_registry(sample_fixtures());
    const auto res = invoke_tool(r, "web_search",
                                 {{"query", std::string("coping with stress")}, {"emotion", std::string("SAD")}});
    const auto& hits = std::get<SearchHits>(res.outputs.at("hits"));
    ASSERT_EQ(hits.size(), 1u);
    EXPECT_EQ(hits[0].url, "https://example.org/3");
}

TEST(InvokeTool, ExtractTakesFirstHitAndBudget) {
    const auto r = mock_registry(sample_fixtures(), ToolLimits{5, 12});
    const SearchHits hits{{"a", "https://example.org/0", ""}, {"b", "https://example.org/1", ""}};
    const auto res = invoke_tool(r, "extract_text", {{"url", hits}});
    EXPECT_EQ(std::get<std::string>(res.outputs.at("content")), "one two");
}

TEST(InvokeTool, MockSpeechIsDeterministic) {
    const auto r = mock_registry(sample_fixtures());
    const auto a = invoke_tool(r, "text_to_speech", {{"text", std::string("hello")}});
    const auto b = invoke_tool(r, "text_to_speech", {{"text", std::string("hello")}});
    EXPECT_EQ(std::get<AudioRef>(a.outputs.at("audio")).digest, std::get<AudioRef>(b.outputs.at("audio")).digest);
    EXPECT_NEAR(std::get<AudioRef>(a.outputs.at("audio")).clip->duration_seconds(), 0.25, 1e-3);
}

TEST(FixtureSet, ParseRoundTripAndReplacement) {
    auto fx = sample_fixtures();
    const FixtureSet back = FixtureSet::parse(fx->to_json());
    EXPECT_EQ(back.size(), fx->size());
    EXPECT_EQ(*back.find("extract_text", "https://example.org/0"), *fx->find("extract_text", "https://example.org/0"));
    fx->add("extract_text", "https://example.org/0", R"({"content":"new"})");
    EXPECT_EQ(fx->size(), 3u);
    EXPECT_EQ(*fx->find("extract_text", "https://example.org/0"), R"({"content":"new"})");
}

TEST(Wire, RequestAndResponseRoundTrip) {
    const auto r = mock_registry(sample_fixtures());
    const ToolSpec& ser = r.at("speech_emotion_recognition");
    const AudioRef audio = AudioRef::of(make_tone(300, 0.1));
    const std::string body = encode_invoke_request(ser, {{"audio", audio}});
    const auto [tool, inputs] = decode_invoke_request(body, r);
    EXPECT_EQ(tool, "speech_emotion_recognition");
    EXPECT_EQ(std::get<AudioRef>(inputs.at("audio")).digest, audio.digest);

    const std::string ok = encode_invoke_ok(ser, {{"emotion", EmotionLabel::sad}, {"confidence", 0.9}});
    const ValueMap out = decode_invoke_response(ser, ok);
    EXPECT_EQ(std::get<EmotionLabel>(out.at("emotion")), EmotionLabel::sad);
    EXPECT_DOUBLE_EQ(std::get<double>(out.at("confidence")), 0.9);

    try {
        decode_invoke_response(ser, encode_invoke_error("model_unavailable", "warming up"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::backend_error);
        EXPECT_NE(e.detail().find("model_unavailable"), std::string::npos);
    }
    EXPECT_EQ(code_of([&] { decode_invoke_response(ser, R"({"status":"ok","outputs":{"emotion":"joyful","confidence":1}})"); }),
              Errc::backend_error);
}

TEST(HttpBackend, RetriesThenSucceeds) {
    const ToolSpec ser = tools::standard_tool_specs()[1];
    test::StubServer stub([&](const httplib::Request&, httplib::Response& res, int call) {
        if (call < 2) {
            res.status = 503;
            return;
        }
        res.set_content(encode_invoke_ok(ser, {{"emotion", EmotionLabel::angry}, {"confidence", 0.5}}),
                        "application/json");
    });
    HttpBackend backend(BackendRef{BackendRef::Kind::http, stub.url(), 5.0, 2});
    const ValueMap out = backend.call(ser, {{"audio", AudioRef::of(make_tone(300, 0.1))}});
    EXPECT_EQ(std::get<EmotionLabel>(out.at("emotion")), EmotionLabel::angry);
    EXPECT_EQ(backend.attempts_made(), 3);
    const auto reqs = stub.requests();
    ASSERT_EQ(reqs.size(), 3u);
    EXPECT_EQ(reqs[0].path, "/invoke");
    EXPECT_EQ(json::parse(reqs[0].body).at("tool"), "speech_emotion_recognition");
}

TEST(HttpBackend, GivesUpAfterRetryBudget) {
    const ToolSpec ser = tools::standard_tool_specs()[1];
    test::StubServer stub([](const httplib::Request&, httplib::Response& res, int) { res.status = 500; });
    HttpBackend backend(BackendRef{BackendRef::Kind::http, stub.url(), 5.0, 1});
    EXPECT_EQ(code_of([&] { backend.call(ser, {{"audio", AudioRef::of(make_tone(300, 0.1))}}); }), Errc::backend_error);
    EXPECT_EQ(stub.requests().size(), 2u);
}

TEST(HttpBackend, SlowServerTimesOut) {
    const ToolSpec ser = tools::standard_tool_specs()[1];
    test::StubServer stub([](const httplib::Request&, httplib::Response& res, int) {
        std::this_thread::sleep_for(std::chrono::milliseconds(600));
        res.status = 500;
    });
    HttpBackend backend(BackendRef{BackendRef::Kind::http, stub.url(), 0.2, 0});
    EXPECT_EQ(code_of([&] { backend.call(ser, {{"audio", AudioRef::of(make_tone(300, 0.1))}}); }),
              Errc::backend_timeout);
}

TEST(HttpBackend, OutboundSearchQueryCarriesEmotion) {
    auto specs = tools::standard_tool_specs();
    test::StubServer stub([&](const httplib::Request&, httplib::Response& res, int) {
        res.set_content(R"({"status":"ok","outputs":{"hits":[]}})", "application/json");
    });
    for (auto& s : specs) s.backend = BackendRef{BackendRef::Kind::http, stub.url(), 5.0, 0};
    const auto r = make_standard_registry(specs, BackendEnv{});
    invoke_tool(r, "web_search", {{"query", std::string("how can I relax")}, {"emotion", EmotionLabel::sad}});
    const json sent = json::parse(stub.requests().at(0).body);
    EXPECT_EQ(sent.at("inputs").at("query"), "how can I relax | user emotional state: sad");
}

TEST(SerpApi, ParsesOrganicResults) {
    test::StubServer stub([](const httplib::Request&, httplib::Response& res, int) {
        res.set_content(R"({"organic_results":[{"title":"A","link":"https://a.example.org","snippet":"x"},
                           {"title":"no link"}]})",
                        "application/json");
    });
    auto specs = tools::standard_tool_specs();
    specs[2].backend = BackendRef{BackendRef::Kind::serpapi, stub.url() + "/search.json", 5.0, 0};
    BackendEnv env;
    env.fixture_sets["bundled"] = sample_fixtures();
    env.search_api_key = "k&y";
    const auto r = make_standard_registry(specs, env);
    const auto res = invoke_tool(r, "web_search", {{"query", std::string("a b")}, {"emotion", EmotionLabel::happy}});
    const auto& hits = std::get<SearchHits>(res.outputs.at("hits"));
    ASSERT_EQ(hits.size(), 1u);
    EXPECT_EQ(hits[0].url, "https://a.example.org");
    const auto req = stub.requests().at(0);
    EXPECT_EQ(req.params.find("q")->second, "a b | user emotional state: happy");
    EXPECT_EQ(req.params.find("api_key")->second, "k&y");
}

TEST(PageFetch, ExtractsReadableText) {
    test::StubServer stub([](const httplib::Request&, httplib::Response& res, int) {
        res.set_content("<html><body><style>p{}</style><h1>Rest</h1><p>Sleep well.</p></body></html>", "text/html");
    });
    auto specs = tools::standard_tool_specs();
    specs[3].backend = BackendRef{BackendRef::Kind::page_fetch, "", 5.0, 0};
    BackendEnv env;
    env.fixture_sets["bundled"] = sample_fixtures();
    const auto r = make_standard_registry(specs, env);
    const auto res = invoke_tool(r, "extract_text", {{"url", stub.url() + "/page"}});
    EXPECT_EQ(std::get<std::string>(res.outputs.at("content")), "Rest Sleep well.");
}

}  // namespace
}  // namespace cha
