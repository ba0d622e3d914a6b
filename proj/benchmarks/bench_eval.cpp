#include <benchmark/benchmark.h>

#include "cha/eval/classify.hpp"
#include "cha/eval/corpus.hpp"
#include "cha/eval/scores.hpp"
#include "fixturegen.hpp"

namespace {

cha::TraceRecord search_trace() {
    cha::TraceRecord t;
    cha::ExecutedStep ser;
    ser.invocation = {1, "speech_emotion_recognition", {{"audio", cha::InputBinding::audio()}}};
    cha::ExecutedStep ws;
    ws.invocation = {2, "web_search", {{"query", cha::InputBinding::query()}, {"emotion", cha::InputBinding::memory(1, "emotion")}}};
    ws.concrete_inputs = {{"query", std::string("q")}, {"emotion", cha::EmotionLabel::sad}};
    t.executed = {ser, ws};
    return t;
}

void BM_ClassifyTrace(benchmark::State& state) {
    const auto t = search_trace();
    for (auto _ : state) benchmark::DoNotOptimize(cha::eval::classify_trace(t));
}
BENCHMARK(BM_ClassifyTrace);

void BM_TraceJsonRoundTrip(benchmark::State& state) {
    const auto t = search_trace();
    for (auto _ : state) benchmark::DoNotOptimize(cha::parse_trace_json(cha::canonical_trace_json(t)));
}
BENCHMARK(BM_TraceJsonRoundTrip);

void BM_Metrics(benchmark::State& state) {
    std::vector<cha::eval::PathClass> classes(static_cast<std::size_t>(state.range(0)),
                                              cha::eval::PathClass::emotion_search);
    for (auto _ : state) benchmark::DoNotOptimize(cha::eval::compute_planner_metrics(classes));
}
BENCHMARK(BM_Metrics)->Arg(500)->Arg(50000);

void BM_AggregateScores(benchmark::State& state) {
    const std::string csv = cha::fixturegen::published_scores_csv();
    for (auto _ : state) {
        benchmark::DoNotOptimize(cha::eval::aggregate_human_scores(cha::eval::parse_scores_csv(csv, true)));
    }
}
BENCHMARK(BM_AggregateScores);

void BM_DrawCells(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(cha::eval::draw_cells(500, 7));
}
BENCHMARK(BM_DrawCells);

}  // namespace

BENCHMARK_MAIN();
