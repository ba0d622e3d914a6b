#include <benchmark/benchmark.h>

#include "cha/planner/planner.hpp"
#include "cha/tools/backends.hpp"
#include "cha/tools/standard_tools.hpp"
#include "fixturegen.hpp"

namespace {

cha::ToolRegistry make_registry() {
    cha::BackendEnv env;
    env.fixture_sets["bundled"] = std::make_shared<cha::FixtureSet>();
    return cha::make_standard_registry(cha::tools::standard_tool_specs(), env);
}

void BM_ParsePlan(benchmark::State& state) {
    const std::string text = cha::fixturegen::scripted_planner_output(cha::fixturegen::questions()[0]);
    for (auto _ : state) benchmark::DoNotOptimize(cha::parse_plan(text));
    state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParsePlan);

void BM_ParseAndValidate(benchmark::State& state) {
    const auto registry = make_registry();
    const std::string text = cha::fixturegen::scripted_planner_output(cha::fixturegen::questions()[1]);
    for (auto _ : state) benchmark::DoNotOptimize(cha::validate_plan(cha::parse_plan(text), registry));
}
BENCHMARK(BM_ParseAndValidate);

void BM_PlannerPrompt(benchmark::State& state) {
    const auto registry = make_registry();
    const std::string tools = cha::tool_descriptions(registry);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cha::build_planner_prompt(cha::fixturegen::questions()[2].text, "", tools));
    }
}
BENCHMARK(BM_PlannerPrompt);

}  // namespace

BENCHMARK_MAIN();
