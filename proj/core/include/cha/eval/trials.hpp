#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cha/domain/trace.hpp"
#include "cha/eval/corpus.hpp"
#include "cha/orchestrator/pipeline.hpp"

namespace cha::eval {

/// Submits one cell's audio somewhere and returns the resulting trace.
/// Implementations must be safe to call from several threads.
class TrialRunner {
public:
    virtual ~TrialRunner() = default;
    virtual TraceLogEntry run(const TrialCell& cell, std::size_t trial_index) = 0;
};

/// Runs trials through an in-process pipeline. Ids are derived from the trial
/// index so a rerun produces identical canonical traces.
class InProcessRunner final : public TrialRunner {
public:
    InProcessRunner(const Pipeline& pipeline, const EvalCorpus& corpus);
    TraceLogEntry run(const TrialCell& cell, std::size_t trial_index) override;

private:
    const Pipeline& pipeline_;
    const EvalCorpus& corpus_;
};

/// Runs trials against a running chat service over HTTP.
class ServiceRunner final : public TrialRunner {
public:
    ServiceRunner(std::string base_url, const EvalCorpus& corpus, double poll_timeout_seconds = 120.0);
    TraceLogEntry run(const TrialCell& cell, std::size_t trial_index) override;

private:
    std::string base_url_;
    const EvalCorpus& corpus_;
    double poll_timeout_seconds_;
};

std::string trial_trace_id(std::size_t trial_index);
std::string trial_session_id(std::size_t trial_index);

/// Draws the cells, runs them with at most `parallel` in flight and returns the
/// traces in trial order. A runner exception becomes a failed trace.
std::vector<TraceLogEntry> run_trials(const EvalCorpus& corpus, std::size_t n, std::uint64_t seed,
                                      TrialRunner& runner, std::size_t parallel = 1);

/// One trace log line per entry.
void write_trace_set(const std::filesystem::path& path, const std::vector<TraceLogEntry>& entries);
std::vector<TraceLogEntry> read_trace_set(const std::filesystem::path& path);

}  // namespace cha::eval
