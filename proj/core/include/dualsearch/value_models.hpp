#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dualsearch/agents.hpp"
#include "dualsearch/errors.hpp"
#include "dualsearch/tree.hpp"

namespace dualsearch::value {

/// Input to the planning value model: a trajectory plus the candidate
/// decision sampled from it. Scoring sees the full decision (thought and,
/// for Search, its query list).
struct PlanCandidate {
  Trajectory traj;
  agents::ActionDecision decision;
};

/// Input to the search value model: one (query, docs) pair from a single
/// retrieve call, under the plan that emitted it.
struct SearchCandidate {
  Trajectory traj;
  std::string plan_text;
  std::string query;
  std::vector<Document> docs;
};

/// Planning value model V over plan candidates; outputs in [-1, 1],
/// deterministic per (model, candidate). Safe for concurrent scoring.
class PlanValueModel {
public:
  virtual ~PlanValueModel() = default;
  virtual double score_plan(const PlanCandidate& candidate) = 0;
};

/// Search value model over (query, docs) candidates; same contract.
class SearchValueModel {
public:
  virtual ~SearchValueModel() = default;
  virtual double score_search(const SearchCandidate& candidate) = 0;
};

template <typename T>
struct ScoredItem {
  T item;
  double score = 0.0;
  std::size_t index = 0;  // position in the input list
};

/// Keeps the `keep` best candidates, descending score, ties by original
/// index. Throws LengthMismatch when the lists disagree in length.
template <typename T>
std::vector<ScoredItem<T>> rank_and_keep(const std::vector<T>& candidates,
                                         const std::vector<double>& scores,
                                         std::size_t keep) {
  if (candidates.size() != scores.size()) {
    throw LengthMismatch("rank_and_keep: " + std::to_string(candidates.size()) +
                         " candidates vs " + std::to_string(scores.size()) +
                         " scores");
  }
  if (keep == 0) {
    throw Error("rank_and_keep: keep must be positive");
  }
  std::vector<ScoredItem<T>> ranked;
  ranked.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    ranked.push_back(ScoredItem<T>{candidates[i], scores[i], i});
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const ScoredItem<T>& a, const ScoredItem<T>& b) {
                     return a.score > b.score;
                   });
  if (ranked.size() > keep) {
    ranked.resize(keep);
  }
  return ranked;
}

/// Canonical text renderings used for remote scoring and for seeding
/// candidate-keyed noise.
std::string render_plan_candidate(const PlanCandidate& candidate);
std::string render_search_candidate(const SearchCandidate& candidate);

/// Scores candidates by running the evaluation prompt against a judge
/// backend at temperature 0 and reading the matching score. Lets the beam
/// search run against a plain text endpoint when no trained head exists.
class JudgeBackedPlanModel : public PlanValueModel {
public:
  explicit JudgeBackedPlanModel(agents::TextGenBackend& judge)
      : judge_(judge) {}
  double score_plan(const PlanCandidate& candidate) override;

private:
  agents::TextGenBackend& judge_;
};

class JudgeBackedSearchModel : public SearchValueModel {
public:
  explicit JudgeBackedSearchModel(agents::TextGenBackend& judge)
      : judge_(judge) {}
  double score_search(const SearchCandidate& candidate) override;

private:
  agents::TextGenBackend& judge_;
};

/// Decorator that flips the sign of the inner score with probability
/// epsilon, keyed by (seed, candidate). Pure per candidate; the instrument
/// for value-vs-random comparisons.
class SignFlipPlanModel : public PlanValueModel {
public:
  SignFlipPlanModel(PlanValueModel& inner, double epsilon, std::uint64_t seed)
      : inner_(inner), epsilon_(epsilon), seed_(seed) {}
  double score_plan(const PlanCandidate& candidate) override;

private:
  PlanValueModel& inner_;
  double epsilon_;
  std::uint64_t seed_;
};

class SignFlipSearchModel : public SearchValueModel {
public:
  SignFlipSearchModel(SearchValueModel& inner, double epsilon,
                      std::uint64_t seed)
      : inner_(inner), epsilon_(epsilon), seed_(seed) {}
  double score_search(const SearchCandidate& candidate) override;

private:
  SearchValueModel& inner_;
  double epsilon_;
  std::uint64_t seed_;
};

}  // namespace dualsearch::value
