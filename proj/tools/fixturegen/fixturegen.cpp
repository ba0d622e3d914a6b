#include "fixturegen.hpp"

#include <fstream>

#include "cha/error.hpp"
#include "cha/orchestrator/executor.hpp"
#include "cha/orchestrator/memory.hpp"
#include "cha/orchestrator/response.hpp"
#include "cha/planner/planner.hpp"
#include "cha/tools/standard_tools.hpp"
#include "cha/util/text.hpp"
#include "json.hpp"

namespace cha::fixturegen {

namespace {

using ojson = nlohmann::ordered_json;

struct Source {
    std::string slug;
    std::string title;
    std::string snippet;
    std::string body;
};

struct Topic {
    std::string slug;
    std::string label;  // short phrase used inside generated titles
    std::vector<Source> sources;
};

const std::string kSite = "https://wellbeing.example.org/";

const std::vector<Topic>& topics() {
    static const std::vector<Topic> t = {
        {"concentration",
         "trouble concentrating",
         {
             {"stress-and-focus", "How stress affects focus and memory",
              "Short-term stress narrows attention. Most people notice it as forgetfulness or drifting thoughts.",
              "Stress hormones prepare the body for quick reactions, and that same state makes sustained focus "
              "harder. When the pressure eases, concentration usually returns. Poor sleep, skipped meals and "
              "long stretches of screen work make the effect stronger. Simple habits help: single-tasking, "
              "short breaks every hour, a consistent bedtime and writing tasks down instead of holding them in "
              "your head. If difficulty concentrating lasts for more than a few weeks, comes with low mood or "
              "loss of interest, or affects work and relationships, it is worth talking to a doctor. Thyroid "
              "problems, anaemia, medication side effects, depression, anxiety and attention disorders can all "
              "show up as concentration problems, and each has its own treatment."},
             {"when-to-see-a-doctor", "When concentration problems need a check-up",
              "Persistent brain fog with other symptoms deserves a medical review.",
              "A general practitioner can rule out physical causes with a short history and basic blood tests. "
              "Bring notes on when the problem started, how sleep has been and any changes in appetite or "
              "mood."},
             {"focus-habits", "Daily habits that protect attention",
              "Movement, daylight and regular sleep are the strongest everyday levers.",
              "Brief walks, daylight in the morning and keeping caffeine to the first half of the day all "
              "support steadier attention."},
         }},
        {"irritability",
         "irritability at work",
         {
             {"burnout-signs", "Burnout or a rough patch? Signs to look for",
              "Burnout combines exhaustion, cynicism about work and a sense of reduced effectiveness.",
              "Irritability is one of the earliest signals of work strain. A rough patch tends to lift after a "
              "deadline or a rest day; burnout does not. Warning signs include dreading the start of each week, "
              "feeling detached from colleagues, headaches or stomach trouble on workdays and needing longer and "
              "longer to recover. Practical steps include clarifying priorities with a manager, protecting "
              "breaks, setting an end to the working day and reconnecting with activities outside work. If "
              "irritability spills into home life or comes with hopelessness, a counselor or occupational "
              "health service can help you plan changes."},
             {"workplace-stress", "Managing workplace stress",
              "Workload, control and support are the three big drivers of job stress.",
              "Small changes in control, such as choosing the order of tasks, measurably reduce stress."},
             {"recovery", "Recovering from work strain",
              "Recovery needs real detachment from work, not just time off.",
              "Evenings without email and a hobby that absorbs attention help the nervous system reset."},
         }},
        {"sleep",
         "sleep difficulties",
         {
             {"finding-the-cause", "Finding the cause of poor sleep",
              "A two-week sleep diary is the simplest way to separate stress from other causes.",
              "Stress-related insomnia usually means lying awake with a busy mind, especially before demanding "
              "days. Other causes look different: loud snoring or gasping can point to sleep apnoea, an urge to "
              "move the legs to restless legs syndrome, and early waking with low mood to depression. Caffeine, "
              "alcohol, late exercise, shift work and some medicines also disturb sleep. Record bedtime, wake "
              "time, awakenings, caffeine and alcohol, and how rested you feel. Share the diary with a doctor if "
              "poor sleep lasts longer than a month; cognitive behavioural therapy for insomnia is the "
              "recommended first treatment."},
             {"sleep-hygiene", "Sleep routines that work",
              "A fixed wake time matters more than a fixed bedtime.",
              "Keep the bedroom cool and dark and get up if you have been awake for a long time."},
             {"stress-and-sleep", "Stress and the sleepless mind",
              "Writing tomorrow's to-do list before bed reduces bedtime worry.",
              "Wind-down time of thirty minutes without screens gives the body a cue that sleep is coming."},
         }},
        {"emotional-awareness",
         "feeling disconnected from emotions",
         {
             {"reconnecting", "Practices for reconnecting with your feelings",
              "Naming emotions, body scans and journaling build emotional awareness step by step.",
              "Feeling numb or far away from your emotions is common during long periods of stress. Short daily "
              "practices help: pause three times a day and name what you feel in one word, do a five-minute body "
              "scan noticing tension, warmth or heaviness, and keep a journal with one line on what happened and "
              "one line on how it felt. Creative activities, time in nature and honest conversations with a "
              "trusted person also help. If numbness lasts, comes with loss of pleasure or follows a difficult "
              "event, a therapist can help you explore it safely."},
             {"mindfulness", "Getting started with mindfulness",
              "Brief, regular sessions work better than occasional long ones.",
              "Ten minutes of attention to the breath, returning each time the mind wanders, is enough to start."},
             {"emotion-words", "Building an emotion vocabulary",
              "More precise words for feelings make them easier to manage.",
              "Try moving from 'bad' to words such as disappointed, tense, lonely or drained."},
         }},
        {"news",
         "news overload",
         {
             {"healthy-news-habits", "Staying informed without burning out",
              "Set times for news, choose a few trusted sources and notice how your body reacts.",
              "Constant exposure to distressing news keeps the stress response switched on. Balance comes from "
              "structure: pick one or two reliable outlets, check them at set times rather than all day, turn "
              "off breaking-news alerts and avoid news in the hour before sleep. Pair information with action "
              "where you can, such as volunteering or donating, which restores a sense of agency. Protect time "
              "for people and activities that refill you. If worry about world events affects sleep, appetite or "
              "daily functioning, talking with a counselor can help."},
             {"doomscrolling", "Breaking the doomscrolling habit",
              "Scrolling is designed to be endless; a timer or app limit adds a stopping point.",
              "Moving news apps off the home screen is a small change that cuts checking noticeably."},
             {"media-and-mood", "How media use shapes mood",
              "Heavy news consumption is linked with higher anxiety in surveys.",
              "Balancing hard news with constructive stories and offline time supports well-being."},
         }},
    };
    return t;
}

/// Extra page the emotion-targeted search surfaces first.
Source emotion_source(const Topic& topic, EmotionLabel e) {
    const std::string label(to_string(e));
    Source s;
    s.slug = topic.slug + "-when-" + label;
    switch (e) {
        case EmotionLabel::sad:
            s.title = "Support for " + topic.label + " when you feel low";
            s.snippet = "Low mood and " + topic.label + " often travel together. Support is available.";
            s.body = "When you are feeling low, " + topic.label +
                     " can feel heavier than it is. Be gentle with yourself and reach out early: a trusted "
                     "friend, your doctor or a counselor. In a crisis, call or text 988 in the US, or your local "
                     "emergency number, to talk with someone right away.";
            break;
        case EmotionLabel::happy:
            s.title = "Building on good momentum: " + topic.label;
            s.snippet = "Positive energy is a great time to set up habits that last.";
            s.body = "Feeling good is an ideal moment to take small, practical steps on " + topic.label +
                     ". Choose one habit, schedule it and track it for two weeks.";
            break;
        case EmotionLabel::angry:
            s.title = "When " + topic.label + " leaves you frustrated";
            s.snippet = "Frustration is a signal. Calming the body first makes problem-solving easier.";
            s.body = "Frustration about " + topic.label +
                     " is understandable. Slow breathing for two minutes, a short walk and writing down what "
                     "is in your control can lower the intensity before you decide on next steps.";
            break;
        case EmotionLabel::neutral:
            s.title = topic.label;
            s.snippet = "";
            s.body = "";
            break;
    }
    return s;
}

std::string url_of(const Topic& topic, const Source& s) { return kSite + topic.slug + "/" + s.slug; }

ojson hits_json(const Topic& topic, const std::vector<Source>& sources) {
    ojson hits = ojson::array();
    for (const auto& s : sources) {
        hits.push_back(ojson{{"title", s.title}, {"url", url_of(topic, s)}, {"snippet", s.snippet}});
    }
    return ojson{{"hits", hits}};
}

ojson text_json(const char* field, const std::string& text) { return ojson{{field, text}}; }

const std::map<std::pair<int, EmotionLabel>, std::string>& responses() {
    // Question 1..5 x happy, sad, angry.
    static const std::map<std::pair<int, EmotionLabel>, std::string> r = [] {
        using E = EmotionLabel;
        std::map<std::pair<int, EmotionLabel>, std::string> m;
        m[{1, E::happy}] =
            "It's great that you're noticing this while you're in good spirits. Short-term stress is a very "
            "common reason for concentration to slip, and small habits like single-tasking, regular breaks and a "
            "steady sleep schedule usually help quickly. If it lasts more than a few weeks or comes with other "
            "changes, a quick check-up with your doctor is a sensible next step.";
        m[{1, E::sad}] =
            "I'm sorry you're going through this; struggling to focus while feeling low can be really draining. "
            "Stress often affects concentration, but when it comes with low mood it's worth taking seriously "
            "and talking with your doctor or a counselor. ";
        m[{1, E::angry}] =
            "It makes sense to feel frustrated when your focus won't cooperate. Stress is a frequent cause, so "
            "try calming your body first with a short walk or slow breathing, then tackle one task at a time. "
            "If the problem persists for weeks, a doctor can check for other causes such as sleep problems or "
            "thyroid issues.";
        m[{2, E::happy}] =
            "Good on you for checking in with yourself. Occasional irritability during a busy stretch is often "
            "just a phase, while burnout shows up as ongoing exhaustion and detachment from work. Use this good "
            "energy to protect your breaks and set a clear end to your workday.";
        m[{2, E::sad}] =
            "That sounds heavy, and feeling irritable on top of feeling down is exhausting. When irritability "
            "sticks around along with low mood, it can be a sign of burnout rather than a passing phase. You "
            "don't have to sort this out alone; a counselor or occupational health service can help you plan "
            "changes. ";
        m[{2, E::angry}] =
            "Your frustration is understandable, especially when work keeps adding pressure. Irritability that "
            "doesn't lift after rest can point to burnout. Try noting what triggers it, talk with your manager "
            "about priorities, and build real breaks into the day to regain some control.";
        m[{3, E::happy}] =
            "Nice that you're approaching this with curiosity. A two-week sleep diary is a simple way to see "
            "whether stress is behind the poor sleep or whether other causes, such as caffeine, snoring or an "
            "irregular schedule, play a role. If it lasts over a month, share the diary with your doctor.";
        m[{3, E::sad}] =
            "I'm sorry sleep has been so hard; being tired and low at the same time takes a toll. Keeping a "
            "short sleep diary can show whether stress is the main driver, and early waking with low mood is "
            "something a doctor should hear about. ";
        m[{3, E::angry}] =
            "Losing sleep is frustrating, and it makes everything else harder. To find the root cause, track "
            "your sleep, caffeine and evening habits for two weeks. Snoring, restless legs or ongoing worry "
            "point in different directions, and a doctor can help you read the pattern.";
        m[{4, E::happy}] =
            "What a thoughtful goal to work on. Naming your feelings a few times a day, a short body scan and a "
            "one-line journal are easy practices to start with, and your positive energy is a great foundation "
            "for turning them into habits.";
        m[{4, E::sad}] =
            "Feeling distant from your own emotions can be lonely and confusing, and it's okay to feel this way. "
            "Gentle practices like naming feelings, body scans and journaling can help you reconnect, and a "
            "therapist can guide you if the numbness stays. ";
        m[{4, E::angry}] =
            "It's frustrating to feel cut off from yourself. Start small: pause a few times a day to name what "
            "you feel, notice where tension sits in your body, and write a line about it in the evening. Those "
            "small steps put you back in charge.";
        m[{5, E::happy}] =
            "It's great that you want to stay informed without losing your balance. Choose a couple of trusted "
            "sources, check them at set times, and turn off breaking-news alerts. Pairing the news with small "
            "actions you care about keeps things positive.";
        m[{5, E::sad}] =
            "The news can feel crushing, and it's understandable that it's weighing on you. Limiting news to set "
            "times, avoiding it before bed and spending time with people who lift you up can help. ";
        m[{5, E::angry}] =
            "It's understandable to feel angry at a constant stream of bad news. Set firm times for checking it, "
            "switch off alerts, and turn some of that energy into action, like volunteering, which helps you "
            "feel less powerless.";
        for (auto& [key, text] : m) {
            if (key.second == E::sad) text += support_resource_text();
        }
        return m;
    }();
    return r;
}

std::string emotion_key(const std::string& query, EmotionLabel e) {
    return normalize_whitespace(tools::compose_search_query(query, e));
}

}  // namespace

const std::vector<QuestionSpec>& questions() {
    static const std::vector<QuestionSpec> q = {
        {1,
         "I've noticed that I've been experiencing some difficulty concentrating lately. Could this just be due "
         "to stress, or should I be concerned about something more?",
         true},
        {2,
         "I've been feeling a bit more irritable than usual lately, especially at work. Could this be a sign of "
         "burnout, or is it just a phase?",
         true},
        {3,
         "I've been experiencing some difficulty sleeping, but I'm not sure if it's related to stress or if there "
         "could be other underlying causes. How can I determine the root cause?",
         false},
        {4,
         "I've been feeling a bit disconnected from my emotions lately. Are there any exercises or practices I "
         "can try to become more in tune with how I'm feeling?",
         true},
        {5,
         "I've been feeling overwhelmed by the constant stream of negative news lately. How can I maintain a "
         "healthy balance between staying informed and protecting my mental well-being?",
         false},
    };
    return q;
}

const std::string& support_resource_text() {
    static const std::string s =
        "If things ever feel like too much or you have thoughts of harming yourself, please reach out right "
        "away: in the US you can call or text 988 to reach the Suicide and Crisis Lifeline, any time of day.";
    return s;
}

AudioClip cell_clip(int question_id, EmotionLabel emotion) {
    int column = 0;
    for (std::size_t i = 0; i < kCorpusEmotions.size(); ++i) {
        if (kCorpusEmotions[i] == emotion) column = static_cast<int>(i);
    }
    const int cell = (question_id - 1) * 3 + column;
    return make_tone(180.0 + 40.0 * cell, 1.5);
}

std::string cell_audio_path(int question_id, EmotionLabel emotion) {
    return "audio/q" + std::to_string(question_id) + "_" + std::string(to_string(emotion)) + ".wav";
}

std::vector<TaskInvocation> scripted_plan(const QuestionSpec& q) {
    std::vector<TaskInvocation> plan;
    plan.push_back({1, std::string(tools::kEmotionRecognition), {{"audio", InputBinding::audio()}}});
    TaskInvocation search{2, std::string(tools::kWebSearch), {{"query", InputBinding::query()}}};
    if (q.emotion_search) search.inputs.emplace("emotion", InputBinding::memory(1, "emotion"));
    plan.push_back(search);
    plan.push_back({3, std::string(tools::kExtractText), {{"url", InputBinding::memory(2, "hits")}}});
    return plan;
}

std::string scripted_planner_output(const QuestionSpec& q) {
    std::string out;
    out += "STRATEGY 1: Run speech_emotion_recognition on $audio, then web_search with $query";
    out += q.emotion_search ? " and the detected emotion" : "";
    out += ", then extract_text on the first search hit.\n";
    out += "STRATEGY 2: Run web_search with $query, then extract_text on the first hit, without checking the "
           "user's emotional state.\n";
    out += "STRATEGY 3: Run speech_emotion_recognition on $audio only and let the response generator answer "
           "from general knowledge.\n\n";
    out += "PROS AND CONS:\n";
    out += "- Strategy 1 grounds the answer in current sources and captures the emotional tone";
    out += q.emotion_search ? ", and targets the search at that tone; it costs three tool calls.\n"
                            : "; the question is factual enough that a plain search finds the right pages.\n";
    out += "- Strategy 2 is cheaper but loses the emotional signal the response needs for empathy.\n";
    out += "- Strategy 3 is fastest but risks an ungrounded answer to a health question.\n\n";
    out += "DECISION: Strategy 1.\n\n";
    out += render_plan_block(scripted_plan(q));
    return out;
}

std::string scripted_response(const QuestionSpec& q, EmotionLabel emotion) {
    return responses().at({q.id, emotion});
}

std::string published_scores_csv() {
    return "question_id,emotion,mean\n"
           "1,happy,6\n1,sad,8.3\n1,angry,6\n"
           "2,happy,6.3\n2,sad,6.3\n2,angry,7.6\n"
           "3,happy,5.3\n3,sad,6\n3,angry,5.3\n"
           "4,happy,5.6\n4,sad,8.6\n4,angry,6.6\n"
           "5,happy,8\n5,sad,7\n5,angry,7.3\n";
}

Bundle generate() {
    Bundle b;

    // Corpus and recordings.
    ojson corpus_questions = ojson::array();
    for (const auto& q : questions()) {
        ojson audio = ojson::object();
        for (EmotionLabel e : kCorpusEmotions) {
            const std::string path = cell_audio_path(q.id, e);
            audio[std::string(to_string(e))] = path;
            b.audio_files[path] = encode_wav(cell_clip(q.id, e));
        }
        corpus_questions.push_back(ojson{{"id", q.id}, {"text", q.text}, {"audio", audio}});
    }
    b.corpus_json = ojson{{"questions", corpus_questions}}.dump(2) + "\n";

    // Tool fixtures: speech tools per cell, search and extraction per query/url.
    for (const auto& q : questions()) {
        for (EmotionLabel e : kCorpusEmotions) {
            const std::string digest = fingerprint_audio(cell_clip(q.id, e));
            b.tools.add(std::string(tools::kSpeechToText), digest, text_json("transcript", q.text).dump());
            b.tools.add(std::string(tools::kEmotionRecognition), digest,
                        ojson{{"emotion", to_string(e)}, {"confidence", 0.91}}.dump());
        }
    }
    for (const auto& q : questions()) {
        const Topic& topic = topics().at(q.id - 1);
        for (const auto& s : topic.sources) {
            b.tools.add(std::string(tools::kExtractText), url_of(topic, s), text_json("content", s.body).dump());
        }
        if (q.emotion_search) {
            for (EmotionLabel e : kCorpusEmotions) {
                const Source extra = emotion_source(topic, e);
                std::vector<Source> ranked{extra};
                ranked.insert(ranked.end(), topic.sources.begin(), topic.sources.end());
                b.tools.add(std::string(tools::kWebSearch), emotion_key(q.text, e), hits_json(topic, ranked).dump());
                b.tools.add(std::string(tools::kExtractText), url_of(topic, extra),
                            text_json("content", extra.body + "\n\n" + topic.sources.front().body).dump());
            }
        } else {
            b.tools.add(std::string(tools::kWebSearch), normalize_whitespace(q.text),
                        hits_json(topic, topic.sources).dump());
        }
    }

    // Language-model script: run each cell through the real planner prompt,
    // executor and response prompt so the keys match what the pipeline asks.
    auto fixtures = std::make_shared<FixtureSet>(b.tools);
    BackendEnv env;
    env.fixture_sets["bundled"] = fixtures;
    const ToolRegistry registry = make_standard_registry(tools::standard_tool_specs(), env);
    const std::string descriptions = tool_descriptions(registry);

    for (const auto& q : questions()) {
        const LmRequest planner_request = build_planner_prompt(q.text, "", descriptions);
        b.lm.add(ScriptedLmBackend::key_for(planner_request.user_text), scripted_planner_output(q));
        Plan plan = validate_plan(parse_plan(scripted_planner_output(q)), registry);

        for (EmotionLabel e : kCorpusEmotions) {
            ShortTermMemory memory;
            const AudioRef audio = AudioRef::of(cell_clip(q.id, e));
            const ExecutionLog log = execute_plan(plan, q.text, audio, registry, memory);
            if (log.failed) throw Error(Errc::invalid_argument, "fixture chain broken for Q" + std::to_string(q.id));
            const LmRequest response_request = build_response_prompt(q.text, memory);
            b.lm.add(ScriptedLmBackend::key_for(response_request.user_text), scripted_response(q, e));
        }
    }

    b.scores_csv = published_scores_csv();
    return b;
}

std::map<std::string, std::string> bundle_files(const Bundle& bundle) {
    std::map<std::string, std::string> files = bundle.audio_files;
    files["corpus.json"] = bundle.corpus_json;
    files["tool_fixtures.json"] = bundle.tools.to_json();
    files["lm_script.json"] = bundle.lm.to_json();
    files["scores_published.csv"] = bundle.scores_csv;
    return files;
}

void write_bundle(const Bundle& bundle, const std::filesystem::path& dir) {
    for (const auto& [rel, bytes] : bundle_files(bundle)) {
        const auto path = dir / rel;
        std::filesystem::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
}

}  // namespace cha::fixturegen
