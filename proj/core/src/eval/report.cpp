#include "cha/eval/report.hpp"

#include <cmath>
#include <cstdio>

#include "cha/error.hpp"
#include "cha/util/text.hpp"
#include "json_codec.hpp"

namespace cha::eval {

namespace {

using detail::ojson;

std::string title_case(EmotionLabel e) {
    std::string s(to_string(e));
    if (!s.empty()) s[0] = static_cast<char>(s[0] - 'a' + 'A');
    return s;
}

std::string pad_left(std::string s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(std::string s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

long long to_units(const nlohmann::json& j, int decimals, const char* ctx) {
    if (!j.is_number()) throw Error(Errc::parse_error, std::string("report: ") + ctx);
    return std::llround(j.get<double>() * std::pow(10.0, decimals));
}

double from_units(long long units, int decimals) { return static_cast<double>(units) / std::pow(10.0, decimals); }

std::string render_text(const EvalReport& report) {
    std::string out;
    if (report.planner) {
        const auto& m = *report.planner;
        out += "Planner paths (n=" + std::to_string(m.n) + ")\n";
        out += "  " + pad_right("PATH_EMOTION_FORWARDED", 24) + pad_left(std::to_string(m.forwarded), 6) + "\n";
        out += "  " + pad_right("PATH_EMOTION_SEARCH", 24) + pad_left(std::to_string(m.search), 6) + "\n";
        out += "  " + pad_right("INVALID", 24) + pad_left(std::to_string(m.invalid), 6) + "\n";
        out += "  metric1 " + format_fixed(m.metric1_hundredths, 2) + "\n";
        out += "  metric2 " + format_fixed(m.metric2_hundredths, 2) + " (denominator: " +
               std::string(to_string(m.metric2_base)) + ")\n";
    }
    if (report.scores) {
        if (!out.empty()) out += "\n";
        const auto& s = *report.scores;
        out += pad_right("Human scores", 16);
        for (EmotionLabel e : kCorpusEmotions) out += pad_left(title_case(e), 8);
        out += "\n";
        for (int q = 0; q < 5; ++q) {
            out += pad_right("  Question " + std::to_string(q + 1), 16);
            for (int e = 0; e < 3; ++e) out += pad_left(format_fixed(s.cell_tenths[q][e], 1), 8);
            out += "\n";
        }
        out += pad_right("  Total Average", 16);
        for (int e = 0; e < 3; ++e) out += pad_left(format_fixed(s.total_hundredths[e], 2), 8);
        out += "\n";
        out += "  Aligned (>= 6.0): " + std::to_string(s.aligned_count()) + " of 15";
        std::string below;
        for (int e = 0; e < 3; ++e) {
            for (int q = 0; q < 5; ++q) {
                if (s.aligned[q][e]) continue;
                below += (below.empty() ? "" : ", ") + ("Q" + std::to_string(q + 1)) + "-" +
                         title_case(kCorpusEmotions[e]);
            }
        }
        if (!below.empty()) out += "; below: " + below;
        out += "\n";
    }
    return out;
}

ojson render_json(const EvalReport& report) {
    ojson doc = ojson::object();
    if (report.planner) {
        const auto& m = *report.planner;
        doc["planner"] = ojson{
            {"n_trials", m.n},
            {"counts",
             ojson{{"PATH_EMOTION_FORWARDED", m.forwarded}, {"PATH_EMOTION_SEARCH", m.search}, {"INVALID", m.invalid}}},
            {"metric1", from_units(m.metric1_hundredths, 2)},
            {"metric2", from_units(m.metric2_hundredths, 2)},
            {"metric2_base", to_string(m.metric2_base)},
        };
    }
    if (!report.classes.empty()) {
        ojson classes = ojson::array();
        for (PathClass c : report.classes) classes.push_back(to_string(c));
        doc["classes"] = std::move(classes);
    }
    if (report.scores) {
        const auto& s = *report.scores;
        ojson cells = ojson::array();
        ojson aligned = ojson::array();
        for (int q = 0; q < 5; ++q) {
            ojson row = ojson::object();
            ojson flags = ojson::object();
            row["question_id"] = q + 1;
            flags["question_id"] = q + 1;
            for (int e = 0; e < 3; ++e) {
                const std::string key(to_string(kCorpusEmotions[e]));
                row[key] = from_units(s.cell_tenths[q][e], 1);
                flags[key] = s.aligned[q][e];
            }
            cells.push_back(std::move(row));
            aligned.push_back(std::move(flags));
        }
        ojson totals = ojson::object();
        for (int e = 0; e < 3; ++e) totals[std::string(to_string(kCorpusEmotions[e]))] = from_units(s.total_hundredths[e], 2);
        doc["scores"] = ojson{{"cells", cells}, {"totals", totals}, {"aligned", aligned}, {"aligned_count", s.aligned_count()}};
    }
    return doc;
}

}  // namespace

std::string emit_report(const EvalReport& report, ReportFormat format) {
    if (format == ReportFormat::text) return render_text(report);
    return render_json(report).dump(2) + "\n";
}

EvalReport parse_report_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::parse_error, std::string("report: ") + e.what());
    }
    if (!doc.is_object()) throw Error(Errc::parse_error, "report: expected an object");

    EvalReport report;
    try {
        if (doc.contains("planner")) {
            const auto& p = doc["planner"];
            PlannerMetrics m;
            m.n = p.at("n_trials").get<std::size_t>();
            m.forwarded = p.at("counts").at("PATH_EMOTION_FORWARDED").get<std::size_t>();
            m.search = p.at("counts").at("PATH_EMOTION_SEARCH").get<std::size_t>();
            m.invalid = p.at("counts").at("INVALID").get<std::size_t>();
            m.metric1_hundredths = to_units(p.at("metric1"), 2, "metric1");
            m.metric2_hundredths = to_units(p.at("metric2"), 2, "metric2");
            m.metric2_base = parse_metric2_base(p.at("metric2_base").get<std::string>());
            report.planner = m;
        }
        if (doc.contains("classes")) {
            for (const auto& c : doc["classes"]) report.classes.push_back(parse_path_class(c.get<std::string>()));
        }
        if (doc.contains("scores")) {
            const auto& s = doc["scores"];
            ScoreMatrix m;
            for (int q = 0; q < 5; ++q) {
                const auto& row = s.at("cells").at(q);
                const auto& flags = s.at("aligned").at(q);
                for (int e = 0; e < 3; ++e) {
                    const std::string key(to_string(kCorpusEmotions[e]));
                    m.cell_tenths[q][e] = to_units(row.at(key), 1, "cell");
                    m.aligned[q][e] = flags.at(key).get<bool>();
                }
            }
            for (int e = 0; e < 3; ++e) {
                m.total_hundredths[e] = to_units(s.at("totals").at(std::string(to_string(kCorpusEmotions[e]))), 2, "total");
            }
            report.scores = m;
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::parse_error, std::string("report: ") + e.what());
    }
    return report;
}

}  // namespace cha::eval
