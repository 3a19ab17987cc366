#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dualsearch/agents.hpp"
#include "dualsearch/errors.hpp"

namespace dualsearch::agents {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) {
    return "";
  }
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

struct MarkerMatch {
  std::size_t begin = std::string::npos;  // start of the marker text
  std::size_t end = std::string::npos;    // first position after the marker
};

/// Finds the last occurrence of a section marker, tolerating the bold
/// variants the output format uses: "**Name:**", "**Name**:", "Name:".
MarkerMatch find_last_marker(const std::string& text, const std::string& name,
                             std::size_t limit = std::string::npos) {
  MarkerMatch best;
  std::size_t pos = 0;
  while ((pos = text.find(name, pos)) != std::string::npos) {
    if (pos >= limit) {
      break;
    }
    std::size_t begin = pos;
    bool bold_open = pos >= 2 && text.compare(pos - 2, 2, "**") == 0;
    if (bold_open) {
      begin = pos - 2;
    }
    std::size_t after = pos + name.size();
    std::size_t end = std::string::npos;
    if (text.compare(after, 3, ":**") == 0) {
      end = after + 3;
    } else if (text.compare(after, 3, "**:") == 0) {
      end = after + 3;
    } else if (after < text.size() && text[after] == ':') {
      end = after + 1;
    }
    if (end != std::string::npos && end <= limit) {
      best = MarkerMatch{begin, end};
    }
    pos = after;
  }
  return best;
}

/// Strips one symmetric quote pair and unescapes JSON-style strings.
std::string unquote(const std::string& raw) {
  if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
    nlohmann::json parsed = nlohmann::json::parse(raw, nullptr, false);
    if (!parsed.is_discarded() && parsed.is_string()) {
      return parsed.get<std::string>();
    }
    return raw.substr(1, raw.size() - 2);
  }
  if (raw.size() >= 2 && raw.front() == '\'' && raw.back() == '\'') {
    return raw.substr(1, raw.size() - 2);
  }
  return raw;
}

/// Splits the body of Search(...) on top-level commas, tracking bracket
/// nesting and quoting. `begin` points just after "Search(". Returns the
/// queries and sets `end` just after the closing parenthesis.
std::vector<std::string> split_search_list(const std::string& text,
                                           std::size_t begin,
                                           std::size_t* end_out) {
  std::vector<std::string> items;
  std::string current;
  int paren_depth = 1;
  int bracket_depth = 0;
  bool outer_bracket = false;
  bool in_dquote = false;
  bool in_squote = false;
  bool escape = false;

  std::size_t i = begin;
  // Optional list bracket directly after the parenthesis.
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) {
    ++i;
  }
  if (i < text.size() && text[i] == '[') {
    outer_bracket = true;
    ++i;
  }

  auto flush = [&]() {
    std::string item = unquote(trim(current));
    if (!item.empty()) {
      items.push_back(std::move(item));
    }
    current.clear();
  };

  for (; i < text.size(); ++i) {
    char c = text[i];
    if (escape) {
      current += c;
      escape = false;
      continue;
    }
    if (in_dquote) {
      if (c == '\\') {
        escape = true;
        current += c;
      } else if (c == '"') {
        in_dquote = false;
        current += c;
      } else {
        current += c;
      }
      continue;
    }
    if (in_squote) {
      current += c;
      if (c == '\'') {
        in_squote = false;
      }
      continue;
    }
    switch (c) {
      case '"':
        in_dquote = true;
        current += c;
        break;
      case '\'':
        in_squote = true;
        current += c;
        break;
      case '(':
        ++paren_depth;
        current += c;
        break;
      case ')':
        --paren_depth;
        if (paren_depth == 0) {
          flush();
          if (end_out != nullptr) {
            *end_out = i + 1;
          }
          return items;
        }
        current += c;
        break;
      case '[':
        ++bracket_depth;
        current += c;
        break;
      case ']':
        if (outer_bracket && bracket_depth == 0) {
          // Closing the list bracket; the next non-space should be ')'.
          break;
        }
        --bracket_depth;
        current += c;
        break;
      case ',':
        if (bracket_depth == 0 && paren_depth == 1) {
          flush();
        } else {
          current += c;
        }
        break;
      default:
        current += c;
        break;
    }
  }
  throw ParseFailure("unterminated Search list");
}

/// Captures balanced-parenthesis content after "Finish(". `begin` points
/// just after the opening parenthesis.
std::string capture_finish(const std::string& text, std::size_t begin,
                           std::size_t* end_out) {
  int depth = 1;
  for (std::size_t i = begin; i < text.size(); ++i) {
    char c = text[i];
    if (c == '(') {
      ++depth;
    } else if (c == ')') {
      --depth;
      if (depth == 0) {
        if (end_out != nullptr) {
          *end_out = i + 1;
        }
        return text.substr(begin, i - begin);
      }
    }
  }
  throw ParseFailure("unterminated Finish action");
}

std::string extract_thought(const std::string& text, std::size_t action_begin) {
  MarkerMatch m = find_last_marker(text, "Thought", action_begin);
  if (m.begin == std::string::npos) {
    return "";
  }
  std::string thought = text.substr(m.end, action_begin - m.end);
  // Drop the list-bullet scaffolding around the action marker.
  std::string out = trim(thought);
  while (!out.empty() && out.back() == '-') {
    out.pop_back();
    out = trim(out);
  }
  return out;
}

}  // namespace

ActionDecision parse_action(const std::string& generated,
                            const ParseOptions& opts) {
  MarkerMatch action = find_last_marker(generated, "Action");
  if (action.begin == std::string::npos) {
    throw ParseFailure("no Action section found");
  }

  std::size_t finish_pos = generated.find("Finish(", action.end);
  std::size_t search_pos = generated.find("Search(", action.end);
  if (finish_pos == std::string::npos && search_pos == std::string::npos) {
    throw ParseFailure("Action section has neither Finish nor Search");
  }

  ActionDecision decision;
  decision.thought = extract_thought(generated, action.begin);

  if (finish_pos < search_pos) {
    std::string answer =
        trim(capture_finish(generated, finish_pos + 7, nullptr));
    if (answer.empty()) {
      throw ParseFailure("Finish action with empty answer");
    }
    decision.action = FinishAction{std::move(answer)};
  } else {
    std::vector<std::string> queries =
        split_search_list(generated, search_pos + 7, nullptr);
    if (queries.empty()) {
      throw ParseFailure("Search action with no queries");
    }
    if (opts.max_queries > 0 &&
        queries.size() > static_cast<std::size_t>(opts.max_queries)) {
      queries.resize(static_cast<std::size_t>(opts.max_queries));
    }
    decision.action = SearchAction{std::move(queries)};
  }
  return decision;
}

namespace {

std::optional<double> find_starred_value(const std::string& text,
                                         const std::string& marker) {
  // Use the last occurrence: the format asks the judge to conclude with it.
  std::size_t pos = text.rfind(marker);
  if (pos == std::string::npos) {
    return std::nullopt;
  }
  std::size_t star = text.find("***", pos + marker.size());
  if (star == std::string::npos) {
    return std::nullopt;
  }
  std::size_t vbegin = star + 3;
  std::size_t vend = text.find("***", vbegin);
  if (vend == std::string::npos) {
    return std::nullopt;
  }
  std::string value = trim(text.substr(vbegin, vend - vbegin));
  if (value.empty()) {
    return std::nullopt;
  }
  char* end = nullptr;
  double parsed = std::strtod(value.c_str(), &end);
  if (end != value.c_str() + value.size() || !std::isfinite(parsed)) {
    return std::nullopt;
  }
  return parsed;
}

}  // namespace

JudgeScores parse_judge_scores(const std::string& generated) {
  std::optional<double> plan =
      find_starred_value(generated, "the value of the thought is");
  if (!plan.has_value()) {
    throw ParseFailure("missing thought value marker");
  }
  std::optional<double> search =
      find_starred_value(generated, "the value of the search result is");
  if (!search.has_value()) {
    throw ParseFailure("missing search result value marker");
  }
  JudgeScores scores;
  scores.plan_score = std::clamp(*plan, -1.0, 1.0);
  scores.search_score = std::clamp(*search, -1.0, 1.0);
  scores.raw_text = generated;
  return scores;
}

std::string render_action(const ActionDecision& decision) {
  std::string out = "- **Thought:** ";
  out += decision.thought;
  out += "\n- **Action:** ";
  if (decision.is_finish()) {
    out += "Finish(";
    out += decision.finish().answer;
    out += ")";
  } else {
    out += "Search([";
    const auto& queries = decision.search().queries;
    for (std::size_t i = 0; i < queries.size(); ++i) {
      if (i > 0) {
        out += ", ";
      }
      out += nlohmann::json(queries[i]).dump();
    }
    out += "])";
  }
  return out;
}

}  // namespace dualsearch::agents
