#include "cha/error.hpp"
#include "cha/planner/planner.hpp"
#include "cha/util/text.hpp"

namespace cha {

namespace {

constexpr std::string_view kSystemText =
    "You are the health-agent task planner of a voice-based conversational health agent that "
    "supports people with mental-health questions. You never answer the user directly; you decide "
    "which tasks must run so that a separate response generator can reply with empathy and "
    "reliable information.";

constexpr std::string_view kDirectives =
    "Plan in three stages:\n"
    "1. Devise three separate strategies, each a sequence of tasks with specified inputs. "
    "Label them \"STRATEGY 1:\", \"STRATEGY 2:\" and \"STRATEGY 3:\".\n"
    "2. Outline the pros and cons of these strategies under the heading \"PROS AND CONS:\".\n"
    "3. Determine the most suitable strategy for the query at hand under the heading \"DECISION:\".\n";

constexpr std::string_view kOutputContract =
    "Finish your answer with a fenced block labelled FINAL_PLAN that holds the chosen strategy as a "
    "JSON array of {\"step\", \"task\", \"inputs\"} objects, steps numbered from 1:\n"
    "```FINAL_PLAN\n"
    "[{\"step\": 1, \"task\": \"<tool name>\", \"inputs\": {\"<parameter>\": \"<value>\"}}]\n"
    "```\n"
    "Every input value is a string: either a literal, or one of the references $query (the user's "
    "transcribed question), $audio (the user's recorded voice) or $step<k>.<field> (output <field> "
    "of an earlier step k).\n";

}  // namespace

LmRequest build_planner_prompt(std::string_view query, std::string_view memory_summary,
                               std::string_view descriptions) {
    if (trim(descriptions).empty()) throw Error(Errc::invalid_argument, "empty tool descriptions");

    std::string user = "ROLE: health-agent task planner\n\n";
    user += "AVAILABLE TOOLS:\n";
    user += descriptions;
    if (user.back() != '\n') user += '\n';
    user += '\n';
    user += "QUERY: ";
    user += query;
    user += '\n';
    const std::string_view summary = trim(memory_summary);
    if (summary.empty()) {
        user += "MEMORY: (empty)\n";
    } else {
        user += "MEMORY:\n";
        user += summary;
        user += '\n';
    }
    user += '\n';
    user += kDirectives;
    user += '\n';
    user += kOutputContract;

    LmRequest request;
    request.system_text = std::string(kSystemText);
    request.user_text = std::move(user);
    return request;
}

}  // namespace cha
