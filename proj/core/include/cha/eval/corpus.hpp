#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cha/domain/audio.hpp"
#include "cha/domain/emotion.hpp"

namespace cha::eval {

struct CorpusQuestion {
    int id = 0;
    std::string text;
    // Per emotion: a wav path (relative to the corpus file) or "sha256:<digest>"
    // naming a clip known only to the mock fixture set.
    std::map<EmotionLabel, std::string> audio;
};

/// Five questions, each recorded in the three corpus emotions.
class EvalCorpus {
public:
    static constexpr std::size_t kQuestions = 5;
    static constexpr std::size_t kCells = kQuestions * kCorpusEmotions.size();

    /// Throws Errc::parse_error, Errc::missing_cell.
    static EvalCorpus parse(std::string_view json_text, std::filesystem::path base_dir = {});
    static EvalCorpus load(const std::filesystem::path& path);

    const std::vector<CorpusQuestion>& questions() const { return questions_; }
    const CorpusQuestion& question(int id) const;

    /// The canonical clip for a cell. Digest-only entries yield a ref without samples.
    AudioRef audio_for(int question_id, EmotionLabel emotion) const;

    std::string to_json() const;

private:
    std::vector<CorpusQuestion> questions_;
    std::filesystem::path base_dir_;
};

struct TrialCell {
    int question_id = 0;
    EmotionLabel emotion = EmotionLabel::happy;

    friend bool operator==(const TrialCell&, const TrialCell&) = default;
};

/// The i-th cell in question-major order: 0 -> (1, happy), 1 -> (1, sad), ...
TrialCell cell_at(std::size_t index);

/// `n` cells drawn uniformly from the 15 using mt19937_64(seed) with
/// rejection sampling, so the sequence is a pure function of (seed, n).
std::vector<TrialCell> draw_cells(std::size_t n, std::uint64_t seed);

}  // namespace cha::eval
