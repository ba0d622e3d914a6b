#include <gtest/gtest.h>

#include <fstream>

#include "cha/planner/planner.hpp"
#include "cha/tools/backends.hpp"
#include "cha/tools/standard_tools.hpp"
#include "fixturegen.hpp"

namespace cha {
namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

TEST(Fixtures, CheckedInBundleMatchesGenerator) {
    const auto files = fixturegen::bundle_files(fixturegen::generate());
    for (const auto& [rel, bytes] : files) {
        const auto path = std::filesystem::path(CHA_FIXTURE_DIR) / rel;
        ASSERT_TRUE(std::filesystem::exists(path)) << rel;
        EXPECT_TRUE(slurp(path) == bytes) << rel << " is stale; regenerate with cha-fixtures --out fixtures";
    }
}

TEST(Fixtures, GenerationIsDeterministic) {
    EXPECT_EQ(fixturegen::bundle_files(fixturegen::generate()), fixturegen::bundle_files(fixturegen::generate()));
}

TEST(Fixtures, ScriptedPlansValidate) {
    BackendEnv env;
    env.fixture_sets["bundled"] = std::make_shared<FixtureSet>();
    const auto registry = make_standard_registry(tools::standard_tool_specs(), env);
    int searches = 0;
    for (const auto& q : fixturegen::questions()) {
        const Plan p = validate_plan(parse_plan(fixturegen::scripted_planner_output(q)), registry);
        EXPECT_FALSE(p.degraded_parse);
        EXPECT_EQ(p.chosen, fixturegen::scripted_plan(q));
        searches += q.emotion_search;
    }
    EXPECT_EQ(searches, 3);
}

TEST(Fixtures, SadRepliesCarrySupportResources) {
    for (const auto& q : fixturegen::questions()) {
        for (auto e : kCorpusEmotions) {
            const bool has = fixturegen::scripted_response(q, e).find(fixturegen::support_resource_text()) !=
                             std::string::npos;
            EXPECT_EQ(has, e == EmotionLabel::sad) << q.id;
        }
    }
}

TEST(Fixtures, CellClipsAreDistinct) {
    std::set<std::string> digests;
    for (int q = 1; q <= 5; ++q) {
        for (auto e : kCorpusEmotions) digests.insert(fingerprint_audio(fixturegen::cell_clip(q, e)));
    }
    EXPECT_EQ(digests.size(), 15u);
}

}  // namespace
}  // namespace cha
