#include <cstddef>
#include <string>

#include <nlohmann/json.hpp>

#include "dualsearch/agents.hpp"
#include "dualsearch/errors.hpp"

namespace dualsearch::agents {

namespace {

constexpr const char* kStepPromptHead =
    "**You are a highly capable web agent. Your task is to engage in "
    "multi-step reasoning and propose plans to reach a final answer for the "
    "given question.**\n"
    "\n"
    "For each step, please include the following elements:\n"
    "\n"
    "**Thought:** Offer a comprehensive and detailed analysis. This section "
    "should cover:\n"
    "    - An analysis of the specific information required to address the "
    "question effectively and the information currently available.\n"
    "    - If the information is enough to answer the question, you should "
    "conduct deep analysis based on the information and then answer the "
    "question.\n"
    "    - If the information is not enough to answer the question, you "
    "should analyze whether the current plan progresses well.\n"
    "        - If yes, predict the next action.\n"
    "        - If no, reflect on why the progress is not good and then "
    "propose a new plan.\n"
    "\n"
    "**Action:** Provide the next action. This section should cover:\n"
    "   - If the information is enough to answer the question, you should "
    "output the final answer in format of Finish(put the answer here) "
    "without extra content.\n"
    "   - If the information is not enough to answer the question, you "
    "should clearly specify the exact query for the next search in the "
    "format Search([List of Queries]) without extra content. Ensure the "
    "queries convey the same semantic information but are expressed "
    "differently to enhance the likelihood of finding the necessary "
    "information.\n"
    "\n";

constexpr const char* kStepPromptTail =
    "\n"
    "\n"
    "**The Output Format:**\n"
    "- **Thought:** [Detailed analysis of the needed information, existing "
    "information, identifies whether information is enough. If enough, "
    "conduct analysis to obtain the final answer, else, identify what still "
    "needs to be searched]\n"
    "- **Action:** [Finish(put the answer here) or Search([List of "
    "Queries])]\n"
    "\n"
    "Please provide the plan for the next step:\n";

constexpr const char* kJudgePromptHead =
    "**Task:** Assess the effectiveness of the thought and the search result "
    "in the last reasoning step.\n"
    "As an advanced web search agent, your role is to systematically "
    "evaluate the current step.\n";

constexpr const char* kJudgePromptTail =
    "\n"
    "\n"
    "As an expert in web search, your tasks are as follows:\n"
    "1. Analyze the thought in the last step: Evaluate the thought and "
    "determine its effectiveness in reaching the final answer. Assign a "
    "score between -1 and 1, where -1 means the thought is useless and 1 "
    "means the thought is very effective.\n"
    "2. Analyze the search result in the last step: Evaluate the search "
    "result and determine its effectiveness in reaching the final answer. "
    "Assign a score between -1 and 1, where -1 means the search result was "
    "ineffective, and 1 means the search results were highly useful.\n"
    "\n"
    "You should output the following elements\n"
    "**Analysis of the thought:**\n"
    "- Analyze whether the thought from the last step were helpful in "
    "progressing toward the final answer.\n"
    "- Assign a score between -1 and 1, where -1 means the step was "
    "ineffective, and 1 indicates high usefulness.\n"
    "- You must conclude the analysis with the format of \"the value of the "
    "thought is ***x***\", where x represent the value and * is the "
    "identifier. Remember that you must output the value x with identifier "
    "***.\n"
    "\n"
    "**Analysis of the search result:**\n"
    "- Analyze whether the search query and search results from the last "
    "step were helpful in progressing toward the final answer.\n"
    "- Assign a score between -1 and 1, where -1 means the step was "
    "ineffective, and 1 indicates high usefulness.\n"
    "- You must conclude the analysis with the format of \"the value of the "
    "search result is ***x***\", where x represent the value and * is the "
    "identifier. Remember that you must output the value x with identifier "
    "***.\n"
    "\n"
    "Please begin by analyzing the previous step:\n"
    "**Analysis of the thought:**\n";

constexpr const char* kQuestionPrefix = "For the question: ";
constexpr const char* kQuestionSuffix =
    ", here is the reasoning process so far:\n";

void render_step(const StepContent& step, std::string& out) {
  out += "**Thought:** ";
  out += step.plan_text;
  out += "\n**Action:** ";
  if (step.answer.has_value()) {
    out += "Finish(";
    out += *step.answer;
    out += ")";
  } else {
    out += "Search([";
    for (std::size_t i = 0; i < step.queries.size(); ++i) {
      if (i > 0) {
        out += ", ";
      }
      out += nlohmann::json(step.queries[i]).dump();
    }
    out += "])";
    out += "\n**Observation:**";
    if (step.retrieved_docs.empty()) {
      out += "\n(no documents retrieved)";
    } else {
      for (std::size_t i = 0; i < step.retrieved_docs.size(); ++i) {
        const Document& d = step.retrieved_docs[i];
        out += "\n[" + std::to_string(i + 1) + "] " + d.title;
        out += "\n" + d.text;
      }
    }
  }
}

}  // namespace

std::string render_history(const std::vector<StepContent>& steps) {
  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i > 0) {
      out += "\n\n";
    }
    render_step(steps[i], out);
  }
  return out;
}

std::string build_step_prompt(const Trajectory& traj) {
  std::string out = kStepPromptHead;
  out += kQuestionPrefix;
  out += traj.question;
  out += kQuestionSuffix;
  out += render_history(traj.steps);
  out += kStepPromptTail;
  return out;
}

std::string build_judge_prompt(const Trajectory& traj,
                               const StepContent& last_step) {
  std::vector<StepContent> steps = traj.steps;
  steps.push_back(last_step);
  std::string out = kJudgePromptHead;
  out += kQuestionPrefix;
  out += traj.question;
  out += kQuestionSuffix;
  out += render_history(steps);
  out += kJudgePromptTail;
  return out;
}

PromptView parse_prompt(const std::string& prompt) {
  PromptView view;
  const std::string prefix = kQuestionPrefix;
  std::size_t qpos = prompt.find(prefix);
  if (qpos == std::string::npos) {
    throw ParseFailure("prompt has no question line");
  }
  std::size_t qstart = qpos + prefix.size();
  std::size_t qend = prompt.find(kQuestionSuffix, qstart);
  if (qend == std::string::npos) {
    throw ParseFailure("prompt question line is unterminated");
  }
  view.question = prompt.substr(qstart, qend - qstart);

  std::size_t hstart = qend + std::string(kQuestionSuffix).size();
  // History runs until the fixed trailing section of either template.
  std::size_t hend = prompt.find("\n\n**The Output Format:**", hstart);
  if (hend == std::string::npos) {
    hend = prompt.find("\n\nAs an expert in web search", hstart);
  }
  if (hend == std::string::npos) {
    hend = prompt.size();
  }
  const std::string history = prompt.substr(hstart, hend - hstart);

  // Steps begin at line-initial thought markers.
  const std::string marker = "**Thought:** ";
  std::vector<std::size_t> starts;
  std::size_t pos = 0;
  while ((pos = history.find(marker, pos)) != std::string::npos) {
    if (pos == 0 || history[pos - 1] == '\n') {
      starts.push_back(pos);
    }
    pos += marker.size();
  }
  for (std::size_t i = 0; i < starts.size(); ++i) {
    std::size_t begin = starts[i];
    std::size_t end = (i + 1 < starts.size()) ? starts[i + 1] : history.size();
    std::string block = history.substr(begin, end - begin);

    PromptStep step;
    ActionDecision decision = parse_action(block, ParseOptions{.max_queries = 1 << 20});
    step.plan_text = decision.thought;
    if (decision.is_finish()) {
      step.answer = decision.finish().answer;
    } else {
      step.queries = decision.search().queries;
    }
    // Observation doc titles: lines of the form "[i] Title".
    std::size_t obs = block.find("**Observation:**");
    if (obs != std::string::npos) {
      std::size_t lstart = obs;
      while (lstart < block.size()) {
        std::size_t lend = block.find('\n', lstart);
        if (lend == std::string::npos) {
          lend = block.size();
        }
        std::string line = block.substr(lstart, lend - lstart);
        if (!line.empty() && line[0] == '[') {
          std::size_t close = line.find("] ");
          if (close != std::string::npos &&
              line.find_first_not_of("0123456789", 1) == close) {
            step.doc_titles.push_back(line.substr(close + 2));
          }
        }
        lstart = lend + 1;
      }
    }
    view.steps.push_back(std::move(step));
  }
  return view;
}

}  // namespace dualsearch::agents
