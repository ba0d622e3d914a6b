#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "cha/domain/audio.hpp"
#include "cha/domain/emotion.hpp"
#include "cha/domain/plan.hpp"
#include "cha/planner/lm.hpp"
#include "cha/tools/backends.hpp"

namespace cha::fixturegen {

struct QuestionSpec {
    int id = 0;
    std::string text;
    bool emotion_search = false;  // scripted planner binds the emotion into the search
};

/// The five evaluation questions.
const std::vector<QuestionSpec>& questions();

/// Deterministic stand-in recording for one corpus cell.
AudioClip cell_clip(int question_id, EmotionLabel emotion);
std::string cell_audio_path(int question_id, EmotionLabel emotion);  // relative, e.g. audio/q1_sad.wav

/// The scripted planner's chosen plan for a question.
std::vector<TaskInvocation> scripted_plan(const QuestionSpec& q);
/// Full planner completion: deliberation plus FINAL_PLAN block.
std::string scripted_planner_output(const QuestionSpec& q);
/// Canned responder reply for a cell.
std::string scripted_response(const QuestionSpec& q, EmotionLabel emotion);
/// Sentence every sad-cell reply carries.
const std::string& support_resource_text();

/// Published human-score cells in pre-averaged CSV form.
std::string published_scores_csv();

struct Bundle {
    std::string corpus_json;
    std::map<std::string, std::string> audio_files;  // relative path -> wav bytes
    FixtureSet tools;
    ScriptedLmBackend lm;
    std::string scores_csv;
};

Bundle generate();

/// Writes corpus.json, tool_fixtures.json, lm_script.json, scores_published.csv and audio/.
void write_bundle(const Bundle& bundle, const std::filesystem::path& dir);

/// Every file write_bundle would produce, as relative path -> bytes.
std::map<std::string, std::string> bundle_files(const Bundle& bundle);

}  // namespace cha::fixturegen
