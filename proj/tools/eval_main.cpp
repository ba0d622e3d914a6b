// Evaluation harness: trial runs, path classification and human-score aggregation.
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cha/error.hpp"
#include "cha/eval/classify.hpp"
#include "cha/eval/report.hpp"
#include "cha/eval/scores.hpp"
#include "cha/eval/trials.hpp"
#include "cha/service/config.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw cha::Error(cha::Errc::io_error, "cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw cha::Error(cha::Errc::io_error, "cannot write " + path);
    out << text;
}

void emit(const cha::eval::EvalReport& report, const std::string& out_path, const std::string& format) {
    const auto json = cha::eval::emit_report(report, cha::eval::ReportFormat::json);
    if (!out_path.empty()) write_file(out_path, json);
    std::cout << (format == "json" ? json : cha::eval::emit_report(report, cha::eval::ReportFormat::text));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Planner and empathy evaluation harness"};
    app.require_subcommand(1);

    // eval run
    auto* run = app.add_subcommand("run", "run trials over the question x emotion corpus");
    std::string corpus_path = (cha::bundled_fixtures_dir() / "corpus.json").string();
    std::size_t n = 500;
    std::uint64_t seed = 7;
    std::string traces_out, service_url, config_path, fixtures_dir;
    bool mock_all = false;
    std::size_t parallel = 1;
    run->add_option("--corpus", corpus_path, "corpus file")->capture_default_str();
    run->add_option("--n", n, "number of trials")->capture_default_str();
    run->add_option("--seed", seed, "seed for the cell draws")->capture_default_str();
    run->add_option("--out", traces_out, "trace set output (jsonl)")->required();
    auto* svc = run->add_option("--service", service_url, "base URL of a running service");
    run->add_flag("--mock-all", mock_all, "run in-process against the bundled fixtures")->excludes(svc);
    run->add_option("--config", config_path, "service config for in-process runs")->excludes(svc);
    run->add_option("--fixtures-dir", fixtures_dir, "fixture directory for in-process runs");
    run->add_option("--parallel", parallel, "trials in flight")->capture_default_str();

    // eval classify
    auto* classify = app.add_subcommand("classify", "classify a trace set and compute planner metrics");
    std::string traces_in, classify_out, format = "text", metric2_base = "all_trials";
    classify->add_option("--traces", traces_in, "trace set (jsonl)")->required();
    classify->add_option("--out", classify_out, "report output (json)");
    classify->add_option("--metric2-base", metric2_base, "all_trials or valid_trials")->capture_default_str();

    // eval scores
    auto* scores = app.add_subcommand("scores", "aggregate human evaluator scores");
    std::string table_path, scores_out;
    bool pre_averaged = false;
    scores->add_option("--table", table_path, "scores csv")->required();
    scores->add_option("--out", scores_out, "report output (json)");
    scores->add_flag("--pre-averaged", pre_averaged, "rows are question_id,emotion,mean");

    for (auto* sub : {classify, scores}) {
        sub->add_option("--format", format, "stdout rendering: text or json")->check(CLI::IsMember({"text", "json"}));
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const auto corpus = cha::eval::EvalCorpus::load(corpus_path);
            const auto started = std::chrono::steady_clock::now();
            std::vector<cha::TraceLogEntry> traces;
            if (!service_url.empty()) {
                cha::eval::ServiceRunner runner(service_url, corpus);
                traces = cha::eval::run_trials(corpus, n, seed, runner, parallel);
            } else {
                auto config = config_path.empty() ? cha::default_service_config()
                                                  : cha::load_service_config(config_path);
                cha::apply_environment(config);
                if (!fixtures_dir.empty()) config.fixtures_dir = fixtures_dir;
                if (mock_all) cha::force_mock_backends(config);
                auto runtime = cha::build_runtime(config);
                cha::Pipeline pipeline(runtime->registry, *runtime->planner_lm, *runtime->responder_lm, nullptr,
                                       runtime->pipeline);
                cha::eval::InProcessRunner runner(pipeline, corpus);
                traces = cha::eval::run_trials(corpus, n, seed, runner, parallel);
            }
            cha::eval::write_trace_set(traces_out, traces);
            std::size_t finished = 0;
            for (const auto& t : traces) finished += t.trace.outcome.finished() ? 1 : 0;
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
            std::cout << "ran " << traces.size() << " trials (" << finished << " finished) in " << secs
                      << " s; traces written to " << traces_out << "\n";
            return 0;
        }
        if (classify->parsed()) {
            cha::eval::EvalReport report;
            for (const auto& entry : cha::eval::read_trace_set(traces_in)) {
                report.classes.push_back(cha::eval::classify_trace(entry.trace));
            }
            report.planner = cha::eval::compute_planner_metrics(report.classes,
                                                                cha::eval::parse_metric2_base(metric2_base));
            emit(report, classify_out, format);
            return 0;
        }
        if (scores->parsed()) {
            cha::eval::EvalReport report;
            report.scores =
                cha::eval::aggregate_human_scores(cha::eval::parse_scores_csv(read_file(table_path), pre_averaged));
            emit(report, scores_out, format);
            return 0;
        }
    } catch (const cha::Error& e) {
        std::cerr << "eval: " << cha::to_string(e.code()) << ": " << e.what() << "\n";
        return 1;
    }
    return 0;
}
