#include "cha/eval/scores.hpp"

#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "cha/error.hpp"
#include "cha/util/text.hpp"

namespace cha::eval {

namespace {

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.emplace_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

int column_index(const std::vector<std::string>& header, std::string_view name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (to_lower(header[i]) == name) return static_cast<int>(i);
    }
    throw Error(Errc::parse_error, "scores: missing column '" + std::string(name) + "'");
}

int emotion_column(EmotionLabel e) {
    for (std::size_t i = 0; i < kCorpusEmotions.size(); ++i) {
        if (kCorpusEmotions[i] == e) return static_cast<int>(i);
    }
    return -1;
}

}  // namespace

long long div_round_half_away(long long numerator, long long denominator) {
    if (denominator == 0) throw Error(Errc::invalid_argument, "division by zero");
    if (denominator < 0) {
        numerator = -numerator;
        denominator = -denominator;
    }
    long long q = numerator / denominator;
    long long r = numerator % denominator;
    if (r < 0) r = -r;
    const bool round_away = 2 * r >= denominator;
    if (round_away) q += numerator < 0 ? -1 : 1;
    return q;
}

long long parse_score_micro(std::string_view text) {
    text = trim(text);
    if (text.empty()) throw Error(Errc::parse_error, "empty score");
    bool negative = false;
    if (text.front() == '-' || text.front() == '+') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    const auto dot = text.find('.');
    const std::string_view whole = text.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (whole.empty() && frac.empty()) throw Error(Errc::parse_error, "score '" + std::string(text) + "'");
    if (frac.size() > 6) throw Error(Errc::parse_error, "score has more than 6 decimals");
    long long units = 0;
    for (char c : whole) {
        if (c < '0' || c > '9') throw Error(Errc::parse_error, "score '" + std::string(text) + "'");
        units = units * 10 + (c - '0');
        if (units > 1'000'000) throw Error(Errc::out_of_range_score, std::string(text));
    }
    long long micro = units * kScoreScale;
    long long place = kScoreScale / 10;
    for (char c : frac) {
        if (c < '0' || c > '9') throw Error(Errc::parse_error, "score '" + std::string(text) + "'");
        micro += (c - '0') * place;
        place /= 10;
    }
    return negative ? -micro : micro;
}

ScoreTable parse_scores_csv(std::string_view text, bool pre_averaged) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        if (!trim(line).empty()) {
            header = split_csv_line(line);
            break;
        }
    }
    if (header.empty()) throw Error(Errc::parse_error, "scores: missing header");

    const int q_col = column_index(header, "question_id");
    const int e_col = column_index(header, "emotion");
    const int ev_col = pre_averaged ? -1 : column_index(header, "evaluator_id");
    const int s_col = column_index(header, pre_averaged ? "mean" : "score");

    ScoreTable table;
    table.pre_averaged = pre_averaged;
    std::set<std::tuple<int, EmotionLabel, std::string>> seen;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_csv_line(line);
        const auto ctx = "scores line " + std::to_string(line_no);
        if (cells.size() != header.size()) throw Error(Errc::parse_error, ctx + ": column count");

        ScoreRow row;
        std::string_view qid = cells[q_col];
        if (starts_with_icase(qid, "q")) qid.remove_prefix(1);
        const auto [ptr, ec] = std::from_chars(qid.data(), qid.data() + qid.size(), row.question_id);
        if (ec != std::errc{} || ptr != qid.data() + qid.size() || row.question_id < 1 || row.question_id > 5) {
            throw Error(Errc::parse_error, ctx + ": question_id '" + cells[q_col] + "'");
        }
        const auto emotion = try_parse_emotion(cells[e_col]);
        if (!emotion || emotion_column(*emotion) < 0) {
            throw Error(Errc::parse_error, ctx + ": emotion '" + cells[e_col] + "'");
        }
        row.emotion = *emotion;
        if (!pre_averaged) {
            row.evaluator_id = cells[ev_col];
            if (row.evaluator_id.empty()) throw Error(Errc::parse_error, ctx + ": empty evaluator_id");
        }
        row.score_micro = parse_score_micro(cells[s_col]);
        if (row.score_micro < 0 || row.score_micro > 10 * kScoreScale) {
            throw Error(Errc::out_of_range_score, ctx + ": " + cells[s_col]);
        }
        if (!seen.emplace(row.question_id, row.emotion, row.evaluator_id).second) {
            throw Error(Errc::duplicate_score, ctx);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

int ScoreMatrix::aligned_count() const {
    int n = 0;
    for (const auto& row : aligned) {
        for (bool b : row) n += b ? 1 : 0;
    }
    return n;
}

ScoreMatrix aggregate_human_scores(const ScoreTable& table) {
    std::array<std::array<long long, 3>, 5> sum{};
    std::array<std::array<long long, 3>, 5> count{};
    for (const auto& row : table.rows) {
        if (row.score_micro < 0 || row.score_micro > 10 * kScoreScale) {
            throw Error(Errc::out_of_range_score, "Q" + std::to_string(row.question_id));
        }
        const int col = emotion_column(row.emotion);
        if (row.question_id < 1 || row.question_id > 5 || col < 0) {
            throw Error(Errc::invalid_argument, "score row outside the 5x3 grid");
        }
        sum[row.question_id - 1][col] += row.score_micro;
        ++count[row.question_id - 1][col];
    }

    ScoreMatrix m;
    constexpr long long kMicroPerTenth = kScoreScale / 10;
    for (int q = 0; q < 5; ++q) {
        for (int e = 0; e < 3; ++e) {
            if (count[q][e] == 0) {
                throw Error(Errc::missing_cell,
                            "Q" + std::to_string(q + 1) + "-" + std::string(to_string(kCorpusEmotions[e])));
            }
            m.cell_tenths[q][e] = div_round_half_away(sum[q][e], count[q][e] * kMicroPerTenth);
            m.aligned[q][e] = m.cell_tenths[q][e] >= kAlignmentThresholdTenths;
        }
    }
    for (int e = 0; e < 3; ++e) {
        long long tenths = 0;
        for (int q = 0; q < 5; ++q) tenths += m.cell_tenths[q][e];
        // mean of five tenths-values, expressed in hundredths
        m.total_hundredths[e] = div_round_half_away(tenths * 10, 5);
    }
    return m;
}

}  // namespace cha::eval
