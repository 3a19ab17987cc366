#include "dualsearch/retrieval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <utility>

#include "dualsearch/errors.hpp"
#include "dualsearch/jsonl.hpp"
#include "dualsearch/rng.hpp"

namespace dualsearch::retrieval {

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      current += static_cast<char>(std::tolower(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) {
    tokens.push_back(std::move(current));
  }
  return tokens;
}

LexicalRetriever::LexicalRetriever(std::vector<Document> corpus)
    : corpus_(std::move(corpus)) {
  for (std::uint32_t i = 0; i < corpus_.size(); ++i) {
    const Document& d = corpus_[i];
    std::set<std::string> seen;
    for (const auto& tok : tokenize(d.title + " " + d.text)) {
      if (seen.insert(tok).second) {
        postings_[tok].push_back(i);
      }
    }
  }
  const double n = static_cast<double>(corpus_.size());
  for (const auto& [tok, docs] : postings_) {
    idf_[tok] =
        std::log((n + 1.0) / (static_cast<double>(docs.size()) + 1.0)) + 1.0;
  }
}

LexicalRetriever LexicalRetriever::from_jsonl(
    const std::filesystem::path& path) {
  std::vector<Document> corpus;
  for (const auto& record : read_jsonl(path)) {
    Document d;
    d.doc_id = record.at("doc_id").get<std::string>();
    d.title = record.at("title").get<std::string>();
    d.text = record.at("text").get<std::string>();
    corpus.push_back(std::move(d));
  }
  return LexicalRetriever(std::move(corpus));
}

std::vector<std::pair<double, const Document*>> LexicalRetriever::ranked(
    const std::string& query) const {
  std::unordered_map<std::uint32_t, double> scores;
  std::set<std::string> seen;
  for (const auto& tok : tokenize(query)) {
    if (!seen.insert(tok).second) {
      continue;
    }
    auto it = postings_.find(tok);
    if (it == postings_.end()) {
      continue;
    }
    const double w = idf_.at(tok);
    for (std::uint32_t doc : it->second) {
      scores[doc] += w;
    }
  }
  std::vector<std::pair<double, const Document*>> out;
  out.reserve(scores.size());
  for (const auto& [doc, score] : scores) {
    out.emplace_back(score, &corpus_[doc]);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) {
      return a.first > b.first;
    }
    return a.second->doc_id < b.second->doc_id;
  });
  return out;
}

std::vector<Document> LexicalRetriever::retrieve(const std::string& query,
                                                 const RetrievalConfig& cfg) {
  if (corpus_.empty()) {
    throw EmptyCorpus("lexical retriever has an empty corpus");
  }
  auto candidates = ranked(query);
  std::vector<Document> out;
  const std::size_t k = cfg.top_k > 0 ? static_cast<std::size_t>(cfg.top_k) : 0;
  for (std::size_t i = 0; i < candidates.size() && out.size() < k; ++i) {
    Document d = *candidates[i].second;
    d.score = candidates[i].first;
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<Document> LexicalRetriever::retrieve_noisy(
    const std::string& query, const RetrievalConfig& cfg) {
  if (cfg.noise_drop_prob <= 0.0) {
    return retrieve(query, cfg);
  }
  if (corpus_.empty()) {
    throw EmptyCorpus("lexical retriever has an empty corpus");
  }
  auto candidates = ranked(query);
  const std::size_t k = cfg.top_k > 0 ? static_cast<std::size_t>(cfg.top_k) : 0;
  std::vector<Document> out;
  // The noiseless top-k are the relevant set; drop each independently and
  // backfill from the ranked tail so result order stays score-descending.
  for (std::size_t i = 0; i < candidates.size() && out.size() < k; ++i) {
    if (i < k) {
      const double u = hash_unit(
          mix_seed(cfg.seed, query), candidates[i].second->doc_id);
      if (u < cfg.noise_drop_prob) {
        continue;
      }
    }
    Document d = *candidates[i].second;
    d.score = candidates[i].first;
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace dualsearch::retrieval
