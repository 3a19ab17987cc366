#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dualsearch/tree.hpp"

namespace dualsearch::agents {

/// One text-generation call: prompt, sampling temperature, token budget and
/// how many independent completions to return.
struct GenerationRequest {
  std::string prompt_text;
  double temperature = 1.0;
  int max_new_tokens = 1024;
  int sample_count = 1;
};

struct FinishAction {
  std::string answer;
  bool operator==(const FinishAction&) const = default;
};

struct SearchAction {
  std::vector<std::string> queries;
  bool operator==(const SearchAction&) const = default;
};

/// Parsed policy output: the thought plus either Finish(answer) or
/// Search([list of queries]).
struct ActionDecision {
  std::string thought;
  std::variant<FinishAction, SearchAction> action;

  bool is_finish() const { return std::holds_alternative<FinishAction>(action); }
  const FinishAction& finish() const { return std::get<FinishAction>(action); }
  const SearchAction& search() const { return std::get<SearchAction>(action); }

  bool operator==(const ActionDecision&) const = default;
};

/// Parsed judge output; both scores are clamped into [-1, 1].
struct JudgeScores {
  double plan_score = 0.0;
  double search_score = 0.0;
  std::string raw_text;
};

struct ParseOptions {
  /// Upper bound on the number of queries in a Search action; longer lists
  /// are truncated. The output grammar itself does not bound the list.
  int max_queries = 5;
};

// --- Prompt construction -------------------------------------------------

/// Renders a trajectory's steps as Thought/Action/Observation blocks with
/// retrieved document titles and texts. Pure function of its input.
std::string render_history(const std::vector<StepContent>& steps);

/// The step-sampling prompt: instructs the policy to emit a Thought plus a
/// Finish(...) or Search([...]) action for the next step.
std::string build_step_prompt(const Trajectory& traj);

/// The evaluation prompt: asks the judge to score the thought and the search
/// result of the last step, ending each analysis with a ***x*** value
/// marker. The history includes the step under evaluation.
std::string build_judge_prompt(const Trajectory& traj,
                               const StepContent& last_step);

/// Renders a decision in the same output format the step prompt requests,
/// suitable for feeding back through parse_action.
std::string render_action(const ActionDecision& decision);

// --- Output parsing -------------------------------------------------------

/// Extracts the Thought section and the Action from generated text. Search
/// lists are split on top-level commas with bracket/quote awareness and each
/// query is whitespace-trimmed and unquoted. Throws ParseFailure when no
/// recognizable Action is present.
ActionDecision parse_action(const std::string& generated,
                            const ParseOptions& opts = {});

/// Locates both ***x*** value markers, parses the reals and clamps them into
/// [-1, 1]. Throws ParseFailure when either marker is absent.
JudgeScores parse_judge_scores(const std::string& generated);

// --- Prompt introspection -------------------------------------------------

/// One history step as recovered from a prompt built by this module.
struct PromptStep {
  std::string plan_text;
  std::vector<std::string> queries;
  std::optional<std::string> answer;
  std::vector<std::string> doc_titles;
};

/// Structured view of a prompt built by build_step_prompt or
/// build_judge_prompt; table-driven simulators use this to recover the
/// question and reasoning state without a side channel.
struct PromptView {
  std::string question;
  std::vector<PromptStep> steps;
};

PromptView parse_prompt(const std::string& prompt);

// --- Backends ---------------------------------------------------------

/// Text-generation backend. Implementations must tolerate concurrent
/// generate() calls from independent runs.
class TextGenBackend {
public:
  virtual ~TextGenBackend() = default;
  virtual std::vector<std::string> generate(const GenerationRequest& req) = 0;
};

/// Deterministic table-driven backend: maps (question, step index, sample
/// index) to a completion. Consecutive calls for the same (question, step)
/// continue through the sample indices; indices wrap when exhausted.
class ScriptedBackend : public TextGenBackend {
public:
  struct Entry {
    std::string question;
    int step = 0;
    int sample = 0;
    std::string text;
  };

  explicit ScriptedBackend(std::vector<Entry> entries);

  /// Loads line-delimited records {question, step, sample, text}.
  static ScriptedBackend from_jsonl(const std::filesystem::path& path);

  std::vector<std::string> generate(const GenerationRequest& req) override;

  /// Resets the per-(question, step) sample cursors.
  void reset();

private:
  std::map<std::pair<std::string, int>, std::vector<std::string>> table_;
  std::map<std::pair<std::string, int>, std::size_t> cursors_;
  std::mutex mutex_;
};

// --- Sampling ---------------------------------------------------------

struct SamplingOptions {
  /// Extra generations attempted per unparseable sample before dropping it.
  int retry_budget = 1;
  ParseOptions parse;
};

/// Samples up to k decisions from the policy. Unparseable samples are
/// retried up to the retry budget, then dropped; result order is generation
/// order. Throws AllSamplesUnparseable if nothing parses, and propagates
/// BackendUnavailable.
std::vector<ActionDecision> sample_actions(TextGenBackend& backend,
                                           const Trajectory& traj, int k,
                                           double temperature,
                                           const SamplingOptions& opts = {});

}  // namespace dualsearch::agents
