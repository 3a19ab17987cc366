#include "dualsearch/value_models.hpp"

#include <algorithm>

#include "dualsearch/rng.hpp"

namespace dualsearch::value {

namespace {

StepContent step_from_decision(const agents::ActionDecision& decision) {
  StepContent step;
  step.plan_text = decision.thought;
  if (decision.is_finish()) {
    step.answer = decision.finish().answer;
  } else {
    step.queries = decision.search().queries;
  }
  return step;
}

}  // namespace

std::string render_plan_candidate(const PlanCandidate& candidate) {
  std::string out = "question: " + candidate.traj.question + "\n";
  out += agents::render_history(candidate.traj.steps);
  out += "\ncandidate:\n";
  out += agents::render_action(candidate.decision);
  return out;
}

std::string render_search_candidate(const SearchCandidate& candidate) {
  std::string out = "question: " + candidate.traj.question + "\n";
  out += agents::render_history(candidate.traj.steps);
  out += "\ncandidate plan: " + candidate.plan_text;
  out += "\ncandidate query: " + candidate.query;
  out += "\ndocs:";
  for (const auto& d : candidate.docs) {
    out += "\n" + d.doc_id + " | " + d.title;
  }
  return out;
}

double JudgeBackedPlanModel::score_plan(const PlanCandidate& candidate) {
  agents::GenerationRequest req;
  req.prompt_text = agents::build_judge_prompt(
      candidate.traj, step_from_decision(candidate.decision));
  req.temperature = 0.0;
  req.sample_count = 1;
  std::vector<std::string> texts = judge_.generate(req);
  if (texts.empty()) {
    return 0.0;
  }
  return agents::parse_judge_scores(texts.front()).plan_score;
}

double JudgeBackedSearchModel::score_search(const SearchCandidate& candidate) {
  StepContent step;
  step.plan_text = candidate.plan_text;
  step.queries = {candidate.query};
  step.retrieved_docs = candidate.docs;

  agents::GenerationRequest req;
  req.prompt_text = agents::build_judge_prompt(candidate.traj, step);
  req.temperature = 0.0;
  req.sample_count = 1;
  std::vector<std::string> texts = judge_.generate(req);
  if (texts.empty()) {
    return 0.0;
  }
  return agents::parse_judge_scores(texts.front()).search_score;
}

double SignFlipPlanModel::score_plan(const PlanCandidate& candidate) {
  double score = inner_.score_plan(candidate);
  if (epsilon_ > 0.0 &&
      hash_unit(seed_, render_plan_candidate(candidate)) < epsilon_) {
    score = -score;
  }
  return std::clamp(score, -1.0, 1.0);
}

double SignFlipSearchModel::score_search(const SearchCandidate& candidate) {
  double score = inner_.score_search(candidate);
  if (epsilon_ > 0.0 &&
      hash_unit(seed_, render_search_candidate(candidate)) < epsilon_) {
    score = -score;
  }
  return std::clamp(score, -1.0, 1.0);
}

}  // namespace dualsearch::value
