#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dualsearch {

/// One retrieved document.
struct Document {
  std::string doc_id;
  std::string title;
  std::string text;
  double score = 0.0;

  bool operator==(const Document&) const = default;
};

/// Content of one reasoning step: the plan (thought), the search queries it
/// emitted, the documents those queries retrieved, and — for terminal steps —
/// the final answer. A materialized step is either a search step (queries
/// nonempty, answer absent) or a terminal step (answer present, no queries).
/// Docs may be empty on a search step whose retrieval has not run yet
/// (plan candidates under evaluation).
struct StepContent {
  std::string plan_text;
  std::vector<std::string> queries;
  std::vector<Document> retrieved_docs;
  std::optional<std::string> answer;

  bool is_terminal() const { return answer.has_value(); }

  bool operator==(const StepContent&) const = default;
};

using NodeId = std::int64_t;

/// One node of a reasoning tree. Carries the step content plus the dual
/// value statistics: visit count N, running means V_p (plan) and V_s
/// (search), and the raw judge rewards R_p / R_s from the simulation that
/// scored this node (unset until simulated).
struct ReasoningNode {
  NodeId node_id = 0;
  std::optional<NodeId> parent_id;
  std::vector<NodeId> children;
  std::optional<StepContent> step;  // absent on the root
  std::int64_t visit_count = 0;     // N
  double plan_value = 0.0;          // V_p, running mean of plan rewards
  double search_value = 0.0;        // V_s, running mean of search rewards
  std::optional<double> judge_plan_reward;    // R_p
  std::optional<double> judge_search_reward;  // R_s
  bool is_terminal = false;

  // Annotation-time bookkeeping: set when an expansion produced no new
  // children, so selection stops revisiting this node. Not serialized.
  bool expansion_exhausted = false;
};

/// A root-to-node path: the question plus the ordered steps along the path.
/// This is the unit consumed by prompt builders, value models and backends.
struct Trajectory {
  std::string question;
  std::optional<std::vector<std::string>> gold_answers;
  std::vector<StepContent> steps;
};

/// Reasoning tree over one question. Node ids are stable integers in
/// insertion order (root is 0); all downstream tie-breaking is by lowest id,
/// which makes runs reproducible. One tree has one writer; independent trees
/// may be used concurrently.
class ReasoningTree {
public:
  explicit ReasoningTree(std::string question = "",
                         std::vector<std::string> gold_answers = {});

  /// Appends a child under `parent` with fresh statistics (N=0, values 0,
  /// rewards unset). Throws UnknownParent / ParentIsTerminal.
  NodeId add_child(NodeId parent, StepContent step);

  /// Question plus the ordered steps from the root's child down to `node`.
  /// The root maps to a trajectory with zero steps. Throws UnknownNode.
  Trajectory path_to(NodeId node) const;

  /// Incremental-mean update along the root->leaf path, root excluded:
  /// N += 1, V_p += (R_p - V_p)/N, V_s += (R_s - V_s)/N.
  /// Rewards must lie in [-1, 1]. Throws UnknownNode / RewardOutOfRange.
  void backpropagate(NodeId leaf, double plan_reward, double search_reward);

  /// Stores the judge rewards R_p / R_s on a node. Throws UnknownNode /
  /// RewardOutOfRange.
  void set_rewards(NodeId node, double plan_reward, double search_reward);

  void mark_expansion_exhausted(NodeId node);

  const ReasoningNode& node(NodeId id) const;
  bool has_node(NodeId id) const {
    return id >= 0 && static_cast<std::size_t>(id) < nodes_.size();
  }

  /// Number of steps between the root and `node` (root has depth 0).
  int depth(NodeId id) const;

  NodeId root_id() const { return 0; }
  std::size_t node_count() const { return nodes_.size(); }
  const std::vector<ReasoningNode>& nodes() const { return nodes_; }
  const std::string& question() const { return question_; }
  const std::vector<std::string>& gold_answers() const { return gold_answers_; }

private:
  friend ReasoningTree deserialize_tree(std::string_view data);

  ReasoningNode& node_mut(NodeId id);
  static void check_reward(double r, const char* name);

  std::string question_;
  std::vector<std::string> gold_answers_;
  std::vector<ReasoningNode> nodes_;  // node_id == index
};

/// Serializes a tree to one self-contained JSON record (a single line).
/// Reals keep full round-trip precision.
std::string serialize_tree(const ReasoningTree& tree);

/// Parses a record produced by serialize_tree and validates structure
/// (ids in insertion order, parent/child consistency, reachability, value
/// ranges). Throws MalformedStream with position diagnostics.
ReasoningTree deserialize_tree(std::string_view data);

}  // namespace dualsearch
