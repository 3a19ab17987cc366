#include <utility>

#include "dualsearch/agents.hpp"
#include "dualsearch/errors.hpp"
#include "dualsearch/jsonl.hpp"

namespace dualsearch::agents {

ScriptedBackend::ScriptedBackend(std::vector<Entry> entries) {
  for (auto& e : entries) {
    auto key = std::make_pair(e.question, e.step);
    auto& samples = table_[key];
    if (samples.size() <= static_cast<std::size_t>(e.sample)) {
      samples.resize(static_cast<std::size_t>(e.sample) + 1);
    }
    samples[static_cast<std::size_t>(e.sample)] = std::move(e.text);
  }
}

ScriptedBackend ScriptedBackend::from_jsonl(
    const std::filesystem::path& path) {
  std::vector<Entry> entries;
  for (const auto& record : read_jsonl(path)) {
    Entry e;
    e.question = record.at("question").get<std::string>();
    e.step = record.at("step").get<int>();
    e.sample = record.at("sample").get<int>();
    e.text = record.at("text").get<std::string>();
    entries.push_back(std::move(e));
  }
  return ScriptedBackend(std::move(entries));
}

std::vector<std::string> ScriptedBackend::generate(
    const GenerationRequest& req) {
  PromptView view = parse_prompt(req.prompt_text);
  auto key = std::make_pair(view.question, static_cast<int>(view.steps.size()));

  std::lock_guard<std::mutex> lock(mutex_);
  auto it = table_.find(key);
  if (it == table_.end() || it->second.empty()) {
    throw BackendUnavailable("no scripted completions for question \"" +
                             view.question + "\" at step " +
                             std::to_string(view.steps.size()));
  }
  const auto& samples = it->second;
  std::size_t& cursor = cursors_[key];
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(req.sample_count));
  for (int i = 0; i < req.sample_count; ++i) {
    out.push_back(samples[cursor % samples.size()]);
    ++cursor;
  }
  return out;
}

void ScriptedBackend::reset() {
  std::lock_guard<std::mutex> lock(mutex_);
  cursors_.clear();
}

std::vector<ActionDecision> sample_actions(TextGenBackend& backend,
                                           const Trajectory& traj, int k,
                                           double temperature,
                                           const SamplingOptions& opts) {
  if (k < 1) {
    throw Error("sample_actions requires k >= 1");
  }
  GenerationRequest req;
  req.prompt_text = build_step_prompt(traj);
  req.temperature = temperature;
  req.sample_count = k;

  std::vector<std::string> texts = backend.generate(req);
  std::vector<ActionDecision> decisions;
  decisions.reserve(texts.size());
  for (const auto& text : texts) {
    bool parsed = false;
    try {
      decisions.push_back(parse_action(text, opts.parse));
      parsed = true;
    } catch (const ParseFailure&) {
    }
    int retries_left = opts.retry_budget;
    while (!parsed && retries_left > 0) {
      --retries_left;
      GenerationRequest retry = req;
      retry.sample_count = 1;
      std::vector<std::string> extra = backend.generate(retry);
      if (extra.empty()) {
        break;
      }
      try {
        decisions.push_back(parse_action(extra.front(), opts.parse));
        parsed = true;
      } catch (const ParseFailure&) {
      }
    }
  }
  if (decisions.empty()) {
    throw AllSamplesUnparseable("no parseable completions among " +
                                std::to_string(texts.size()) + " samples");
  }
  return decisions;
}

}  // namespace dualsearch::agents
