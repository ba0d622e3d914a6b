#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "cha/domain/trace.hpp"

namespace cha::eval {

enum class PathClass { emotion_forwarded, emotion_search, invalid };

/// "PATH_EMOTION_FORWARDED", "PATH_EMOTION_SEARCH", "INVALID".
std::string_view to_string(PathClass path);
PathClass parse_path_class(std::string_view text);

/// Which of the two accepted planning paths a run followed.
///   search     emotion recognized, a web search bound that emotion, run finished
///   forwarded  emotion recognized, a plain web search, run finished and the
///              responder saw the emotion line
/// Anything else is invalid.
PathClass classify_trace(const TraceRecord& trace);

enum class Metric2Base { all_trials, valid_trials };

std::string_view to_string(Metric2Base base);
Metric2Base parse_metric2_base(std::string_view text);

struct PlannerMetrics {
    std::size_t n = 0;
    std::size_t forwarded = 0;
    std::size_t search = 0;
    std::size_t invalid = 0;
    long long metric1_hundredths = 0;
    long long metric2_hundredths = 0;
    Metric2Base metric2_base = Metric2Base::all_trials;

    friend bool operator==(const PlannerMetrics&, const PlannerMetrics&) = default;
};

/// count/denominator in hundredths, rounded half away from zero.
long long ratio_hundredths(std::size_t count, std::size_t denominator);

/// Throws Errc::empty_trace_set.
PlannerMetrics compute_planner_metrics(const std::vector<PathClass>& classes,
                                       Metric2Base base = Metric2Base::all_trials);

}  // namespace cha::eval
