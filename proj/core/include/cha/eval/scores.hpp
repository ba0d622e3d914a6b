#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "cha/domain/emotion.hpp"

namespace cha::eval {

/// Scores are held as integer micro-units (1.0 == 1'000'000) so that
/// aggregation never touches binary floating point.
inline constexpr long long kScoreScale = 1'000'000;

struct ScoreRow {
    int question_id = 0;
    EmotionLabel emotion = EmotionLabel::happy;
    std::string evaluator_id;  // empty for pre-averaged cells
    long long score_micro = 0;
};

struct ScoreTable {
    bool pre_averaged = false;
    std::vector<ScoreRow> rows;
};

/// Parses a decimal like "8.3" or "10" into micro-units. Throws Errc::parse_error.
long long parse_score_micro(std::string_view text);

/// CSV with a header row. Raw: question_id,emotion,evaluator_id,score.
/// Pre-averaged: question_id,emotion,mean. Throws parse_error,
/// out_of_range_score, duplicate_score.
ScoreTable parse_scores_csv(std::string_view text, bool pre_averaged);

/// Rows and columns follow question id 1..5 and kCorpusEmotions.
struct ScoreMatrix {
    std::array<std::array<long long, 3>, 5> cell_tenths{};
    std::array<long long, 3> total_hundredths{};
    std::array<std::array<bool, 3>, 5> aligned{};

    int aligned_count() const;
    friend bool operator==(const ScoreMatrix&, const ScoreMatrix&) = default;
};

inline constexpr long long kAlignmentThresholdTenths = 60;

/// Cell = mean rounded to one decimal; total = mean of the rounded cells to two
/// decimals; both half away from zero. Throws Errc::missing_cell.
ScoreMatrix aggregate_human_scores(const ScoreTable& table);

/// Rounded integer division, half away from zero.
long long div_round_half_away(long long numerator, long long denominator);

}  // namespace cha::eval
