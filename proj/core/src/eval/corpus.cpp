#include "cha/eval/corpus.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "cha/error.hpp"
#include "json_codec.hpp"

namespace cha::eval {

namespace {

constexpr std::string_view kDigestPrefix = "sha256:";

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

EvalCorpus EvalCorpus::parse(std::string_view json_text, std::filesystem::path base_dir) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::parse_error, std::string("corpus: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("questions") || !doc["questions"].is_array()) {
        throw Error(Errc::parse_error, "corpus: expected {\"questions\": [...]}");
    }
    EvalCorpus corpus;
    corpus.base_dir_ = std::move(base_dir);
    for (const auto& item : doc["questions"]) {
        CorpusQuestion q;
        q.id = detail::get_field<int>(item, "id", "corpus question");
        q.text = detail::get_field<std::string>(item, "text", "corpus question");
        const auto audio = detail::get_field<std::map<std::string, std::string>>(item, "audio", "corpus question");
        for (const auto& [label, ref] : audio) {
            const auto emotion = try_parse_emotion(label);
            if (!emotion) throw Error(Errc::parse_error, "corpus: unknown emotion '" + label + "'");
            q.audio[*emotion] = ref;
        }
        corpus.questions_.push_back(std::move(q));
    }
    if (corpus.questions_.size() != kQuestions) {
        throw Error(Errc::parse_error, "corpus: expected 5 questions");
    }
    for (int id = 1; id <= static_cast<int>(kQuestions); ++id) {
        const auto& q = corpus.question(id);
        for (EmotionLabel e : kCorpusEmotions) {
            if (!q.audio.count(e)) {
                throw Error(Errc::missing_cell, "Q" + std::to_string(id) + "-" + std::string(to_string(e)));
            }
        }
    }
    return corpus;
}

EvalCorpus EvalCorpus::load(const std::filesystem::path& path) {
    return parse(read_file(path), path.parent_path());
}

const CorpusQuestion& EvalCorpus::question(int id) const {
    for (const auto& q : questions_) {
        if (q.id == id) return q;
    }
    throw Error(Errc::missing_cell, "Q" + std::to_string(id));
}

AudioRef EvalCorpus::audio_for(int question_id, EmotionLabel emotion) const {
    const auto& q = question(question_id);
    auto it = q.audio.find(emotion);
    if (it == q.audio.end()) {
        throw Error(Errc::missing_cell, "Q" + std::to_string(question_id) + "-" + std::string(to_string(emotion)));
    }
    const std::string& ref = it->second;
    if (ref.starts_with(kDigestPrefix)) return AudioRef{ref.substr(kDigestPrefix.size()), nullptr};
    std::filesystem::path path(ref);
    if (path.is_relative()) path = base_dir_ / path;
    return AudioRef::of(canonicalize(decode_wav(read_file(path))));
}

std::string EvalCorpus::to_json() const {
    detail::ojson questions = detail::ojson::array();
    for (const auto& q : questions_) {
        detail::ojson audio = detail::ojson::object();
        for (EmotionLabel e : kCorpusEmotions) {
            if (auto it = q.audio.find(e); it != q.audio.end()) audio[std::string(to_string(e))] = it->second;
        }
        questions.push_back(detail::ojson{{"id", q.id}, {"text", q.text}, {"audio", audio}});
    }
    return detail::ojson{{"questions", questions}}.dump(2) + "\n";
}

TrialCell cell_at(std::size_t index) {
    if (index >= EvalCorpus::kCells) throw Error(Errc::invalid_argument, "cell index");
    return TrialCell{static_cast<int>(index / kCorpusEmotions.size()) + 1,
                     kCorpusEmotions[index % kCorpusEmotions.size()]};
}

std::vector<TrialCell> draw_cells(std::size_t n, std::uint64_t seed) {
    // Explicit rejection sampling: std::uniform_int_distribution is not
    // specified bit-for-bit across standard libraries.
    std::mt19937_64 gen(seed);
    constexpr std::uint64_t cells = EvalCorpus::kCells;
    constexpr std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % cells;
    std::vector<TrialCell> out;
    out.reserve(n);
    while (out.size() < n) {
        const std::uint64_t r = gen();
        if (r >= limit) continue;
        out.push_back(cell_at(static_cast<std::size_t>(r % cells)));
    }
    return out;
}

}  // namespace cha::eval
