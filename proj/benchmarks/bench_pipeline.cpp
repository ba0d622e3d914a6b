#include <benchmark/benchmark.h>

#include "cha/orchestrator/pipeline.hpp"
#include "cha/tools/backends.hpp"
#include "cha/tools/standard_tools.hpp"
#include "fixturegen.hpp"

namespace {

// One full mock-backed voice turn: STT, planning, three tools, response, TTS.
void BM_PipelineTurn(benchmark::State& state) {
    static const auto bundle = cha::fixturegen::generate();
    cha::BackendEnv env;
    env.fixture_sets["bundled"] = std::make_shared<cha::FixtureSet>(bundle.tools);
    const auto registry = cha::make_standard_registry(cha::tools::standard_tool_specs(), env);
    auto lm = cha::ScriptedLmBackend::parse(bundle.lm.to_json());
    cha::Pipeline pipeline(registry, lm, lm, nullptr);
    const auto q = static_cast<int>(state.range(0));
    const cha::RunRequest request{"s", "t", cha::AudioRef::of(cha::fixturegen::cell_clip(q, cha::EmotionLabel::sad)),
                                  cha::EmotionLabel::sad};
    for (auto _ : state) benchmark::DoNotOptimize(pipeline.run(request));
}
BENCHMARK(BM_PipelineTurn)->DenseRange(1, 5)->Unit(benchmark::kMicrosecond);

void BM_Fingerprint(benchmark::State& state) {
    const auto clip = cha::make_tone(300, static_cast<double>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(cha::fingerprint_audio(clip));
    state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * clip.samples.size() * 2));
}
BENCHMARK(BM_Fingerprint)->Arg(1)->Arg(10)->Arg(120);

void BM_Canonicalize(benchmark::State& state) {
    const auto clip = cha::make_tone(300, 5.0, 44100);
    for (auto _ : state) benchmark::DoNotOptimize(cha::canonicalize(clip));
}
BENCHMARK(BM_Canonicalize)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
