#include "dualsearch/tree.hpp"

#include <cmath>
#include <utility>

#include <nlohmann/json.hpp>

#include "dualsearch/errors.hpp"

namespace dualsearch {

using json = nlohmann::json;

ReasoningTree::ReasoningTree(std::string question,
                             std::vector<std::string> gold_answers)
    : question_(std::move(question)), gold_answers_(std::move(gold_answers)) {
  ReasoningNode root;
  root.node_id = 0;
  nodes_.push_back(std::move(root));
}

const ReasoningNode& ReasoningTree::node(NodeId id) const {
  if (!has_node(id)) {
    throw UnknownNode("unknown node id " + std::to_string(id));
  }
  return nodes_[static_cast<std::size_t>(id)];
}

ReasoningNode& ReasoningTree::node_mut(NodeId id) {
  if (!has_node(id)) {
    throw UnknownNode("unknown node id " + std::to_string(id));
  }
  return nodes_[static_cast<std::size_t>(id)];
}

NodeId ReasoningTree::add_child(NodeId parent, StepContent step) {
  if (!has_node(parent)) {
    throw UnknownParent("unknown parent id " + std::to_string(parent));
  }
  if (nodes_[static_cast<std::size_t>(parent)].is_terminal) {
    throw ParentIsTerminal("cannot expand terminal node " +
                           std::to_string(parent));
  }
  NodeId id = static_cast<NodeId>(nodes_.size());
  ReasoningNode child;
  child.node_id = id;
  child.parent_id = parent;
  child.is_terminal = step.is_terminal();
  child.step = std::move(step);
  nodes_.push_back(std::move(child));
  nodes_[static_cast<std::size_t>(parent)].children.push_back(id);
  return id;
}

Trajectory ReasoningTree::path_to(NodeId id) const {
  const ReasoningNode* cur = &node(id);
  std::vector<const StepContent*> rev;
  while (cur->parent_id.has_value()) {
    rev.push_back(&*cur->step);
    cur = &nodes_[static_cast<std::size_t>(*cur->parent_id)];
  }
  Trajectory traj;
  traj.question = question_;
  if (!gold_answers_.empty()) {
    traj.gold_answers = gold_answers_;
  }
  traj.steps.reserve(rev.size());
  for (auto it = rev.rbegin(); it != rev.rend(); ++it) {
    traj.steps.push_back(**it);
  }
  return traj;
}

void ReasoningTree::check_reward(double r, const char* name) {
  if (!(r >= -1.0 && r <= 1.0)) {  // also rejects NaN
    throw RewardOutOfRange(std::string(name) + " reward " + std::to_string(r) +
                           " outside [-1, 1]");
  }
}

void ReasoningTree::backpropagate(NodeId leaf, double plan_reward,
                                  double search_reward) {
  check_reward(plan_reward, "plan");
  check_reward(search_reward, "search");
  ReasoningNode* cur = &node_mut(leaf);
  while (cur->parent_id.has_value()) {
    cur->visit_count += 1;
    const double n = static_cast<double>(cur->visit_count);
    cur->plan_value += (plan_reward - cur->plan_value) / n;
    cur->search_value += (search_reward - cur->search_value) / n;
    cur = &nodes_[static_cast<std::size_t>(*cur->parent_id)];
  }
}

void ReasoningTree::set_rewards(NodeId id, double plan_reward,
                                double search_reward) {
  check_reward(plan_reward, "plan");
  check_reward(search_reward, "search");
  ReasoningNode& n = node_mut(id);
  n.judge_plan_reward = plan_reward;
  n.judge_search_reward = search_reward;
}

void ReasoningTree::mark_expansion_exhausted(NodeId id) {
  node_mut(id).expansion_exhausted = true;
}

int ReasoningTree::depth(NodeId id) const {
  const ReasoningNode* cur = &node(id);
  int d = 0;
  while (cur->parent_id.has_value()) {
    ++d;
    cur = &nodes_[static_cast<std::size_t>(*cur->parent_id)];
  }
  return d;
}

namespace {

json doc_to_json(const Document& d) {
  return json{{"doc_id", d.doc_id},
              {"title", d.title},
              {"text", d.text},
              {"score", d.score}};
}

json step_to_json(const StepContent& s) {
  json docs = json::array();
  for (const auto& d : s.retrieved_docs) {
    docs.push_back(doc_to_json(d));
  }
  json j{{"plan_text", s.plan_text},
         {"queries", s.queries},
         {"docs", std::move(docs)}};
  j["answer"] = s.answer.has_value() ? json(*s.answer) : json(nullptr);
  return j;
}

Document doc_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) {
    throw MalformedStream(where + ": document is not an object");
  }
  Document d;
  try {
    d.doc_id = j.at("doc_id").get<std::string>();
    d.title = j.at("title").get<std::string>();
    d.text = j.at("text").get<std::string>();
    d.score = j.at("score").get<double>();
  } catch (const json::exception& e) {
    throw MalformedStream(where + ": " + e.what());
  }
  if (d.doc_id.empty()) {
    throw MalformedStream(where + ": empty doc_id");
  }
  if (!std::isfinite(d.score)) {
    throw MalformedStream(where + ": non-finite score");
  }
  return d;
}

StepContent step_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) {
    throw MalformedStream(where + ": step is not an object");
  }
  StepContent s;
  try {
    s.plan_text = j.at("plan_text").get<std::string>();
    s.queries = j.at("queries").get<std::vector<std::string>>();
    const json& docs = j.at("docs");
    if (!docs.is_array()) {
      throw MalformedStream(where + ": docs is not an array");
    }
    std::size_t i = 0;
    for (const auto& dj : docs) {
      s.retrieved_docs.push_back(
          doc_from_json(dj, where + ".docs[" + std::to_string(i) + "]"));
      ++i;
    }
    const json& ans = j.at("answer");
    if (!ans.is_null()) {
      s.answer = ans.get<std::string>();
    }
  } catch (const json::exception& e) {
    throw MalformedStream(where + ": " + e.what());
  }
  return s;
}

double checked_value(const json& j, const char* key, const std::string& where) {
  double v = j.at(key).get<double>();
  if (!(v >= -1.0 && v <= 1.0)) {
    throw MalformedStream(where + ": " + key + " outside [-1, 1]");
  }
  return v;
}

}  // namespace

std::string serialize_tree(const ReasoningTree& tree) {
  json nodes = json::array();
  for (const auto& n : tree.nodes()) {
    json jn;
    jn["node_id"] = n.node_id;
    jn["parent_id"] =
        n.parent_id.has_value() ? json(*n.parent_id) : json(nullptr);
    jn["children"] = n.children;
    jn["step"] = n.step.has_value() ? step_to_json(*n.step) : json(nullptr);
    jn["N"] = n.visit_count;
    jn["V_p"] = n.plan_value;
    jn["V_s"] = n.search_value;
    jn["R_p"] = n.judge_plan_reward.has_value() ? json(*n.judge_plan_reward)
                                                : json(nullptr);
    jn["R_s"] = n.judge_search_reward.has_value()
                    ? json(*n.judge_search_reward)
                    : json(nullptr);
    jn["is_terminal"] = n.is_terminal;
    nodes.push_back(std::move(jn));
  }
  json record{{"question", tree.question()},
              {"gold_answers", tree.gold_answers()},
              {"nodes", std::move(nodes)}};
  return record.dump();
}

ReasoningTree deserialize_tree(std::string_view data) {
  json record = json::parse(data, nullptr, false);
  if (record.is_discarded()) {
    // Re-parse with exceptions to get the byte position.
    try {
      (void)json::parse(data);
    } catch (const json::parse_error& e) {
      throw MalformedStream(std::string("tree record: ") + e.what());
    }
    throw MalformedStream("tree record: invalid JSON");
  }
  if (!record.is_object()) {
    throw MalformedStream("tree record: not an object");
  }

  ReasoningTree tree;
  try {
    std::string question = record.at("question").get<std::string>();
    std::vector<std::string> golds =
        record.at("gold_answers").get<std::vector<std::string>>();
    tree = ReasoningTree(std::move(question), std::move(golds));
  } catch (const json::exception& e) {
    throw MalformedStream(std::string("tree record: ") + e.what());
  }

  const json* nodes = nullptr;
  {
    auto it = record.find("nodes");
    if (it == record.end() || !it->is_array() || it->empty()) {
      throw MalformedStream("tree record: missing or empty nodes array");
    }
    nodes = &*it;
  }

  // Rebuild through add_child so structural invariants hold by construction;
  // records must list nodes in insertion order (ids 0..n-1), which is what
  // serialize_tree emits.
  for (std::size_t i = 0; i < nodes->size(); ++i) {
    const json& jn = (*nodes)[i];
    const std::string where = "node[" + std::to_string(i) + "]";
    NodeId id = 0;
    try {
      id = jn.at("node_id").get<NodeId>();
    } catch (const json::exception& e) {
      throw MalformedStream(where + ": " + e.what());
    }
    if (id != static_cast<NodeId>(i)) {
      throw MalformedStream(where + ": node_id " + std::to_string(id) +
                            " not in insertion order");
    }
    try {
      const json& parent = jn.at("parent_id");
      const json& step = jn.at("step");
      if (i == 0) {
        if (!parent.is_null() || !step.is_null()) {
          throw MalformedStream("node[0]: root must have null parent and step");
        }
      } else {
        if (parent.is_null() || step.is_null()) {
          throw MalformedStream(where + ": non-root needs parent and step");
        }
        NodeId pid = parent.get<NodeId>();
        if (pid < 0 || pid >= id) {
          throw MalformedStream(where + ": parent " + std::to_string(pid) +
                                " out of range");
        }
        // Deserialized terminal parents are legal targets here only via
        // corrupted streams; surface those as MalformedStream.
        try {
          tree.add_child(pid, step_from_json(step, where));
        } catch (const ParentIsTerminal&) {
          throw MalformedStream(where + ": parent " + std::to_string(pid) +
                                " is terminal");
        }
      }
      ReasoningNode& n = tree.nodes_[static_cast<std::size_t>(id)];
      n.visit_count = jn.at("N").get<std::int64_t>();
      if (n.visit_count < 0) {
        throw MalformedStream(where + ": negative visit count");
      }
      n.plan_value = checked_value(jn, "V_p", where);
      n.search_value = checked_value(jn, "V_s", where);
      if (!jn.at("R_p").is_null()) {
        n.judge_plan_reward = checked_value(jn, "R_p", where);
      }
      if (!jn.at("R_s").is_null()) {
        n.judge_search_reward = checked_value(jn, "R_s", where);
      }
      bool terminal = jn.at("is_terminal").get<bool>();
      if (terminal != n.is_terminal) {
        throw MalformedStream(where +
                              ": is_terminal inconsistent with step answer");
      }
    } catch (const json::exception& e) {
      throw MalformedStream(where + ": " + e.what());
    }
  }

  // Verify recorded children lists match the rebuilt structure.
  for (std::size_t i = 0; i < nodes->size(); ++i) {
    const json& jn = (*nodes)[i];
    std::vector<NodeId> children;
    try {
      children = jn.at("children").get<std::vector<NodeId>>();
    } catch (const json::exception& e) {
      throw MalformedStream("node[" + std::to_string(i) + "]: " + e.what());
    }
    if (children != tree.node(static_cast<NodeId>(i)).children) {
      throw MalformedStream("node[" + std::to_string(i) +
                            "]: children list inconsistent with parent links");
    }
  }
  return tree;
}

}  // namespace dualsearch
