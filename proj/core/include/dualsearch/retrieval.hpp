#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "dualsearch/tree.hpp"

namespace dualsearch::retrieval {

struct RetrievalConfig {
  int top_k = 5;
  double noise_drop_prob = 0.0;  // simulator only
  std::uint64_t seed = 0;
};

/// Top-k document retrieval. Implementations are read-only after
/// construction and safe for concurrent queries.
class Retriever {
public:
  virtual ~Retriever() = default;

  /// At most top_k documents, scores weakly decreasing, deterministic per
  /// (corpus, query, top_k, seed).
  virtual std::vector<Document> retrieve(const std::string& query,
                                         const RetrievalConfig& cfg) = 0;

  /// Like retrieve, but each document of the noiseless top-k is
  /// independently dropped with probability noise_drop_prob (seeded) and
  /// backfilled by lower-ranked distractors. Default: identical to retrieve
  /// (remote retrievers model no noise).
  virtual std::vector<Document> retrieve_noisy(const std::string& query,
                                               const RetrievalConfig& cfg) {
    return retrieve(query, cfg);
  }
};

/// Lowercased, punctuation-stripped tokens.
std::vector<std::string> tokenize(const std::string& text);

/// In-process lexical retriever: distinct-token overlap weighted by inverse
/// document frequency. Score ties break by lowest doc_id.
class LexicalRetriever : public Retriever {
public:
  explicit LexicalRetriever(std::vector<Document> corpus);

  /// Loads a line-delimited corpus of {doc_id, title, text} records.
  static LexicalRetriever from_jsonl(const std::filesystem::path& path);

  std::vector<Document> retrieve(const std::string& query,
                                 const RetrievalConfig& cfg) override;
  std::vector<Document> retrieve_noisy(const std::string& query,
                                       const RetrievalConfig& cfg) override;

  std::size_t corpus_size() const { return corpus_.size(); }

private:
  /// All positively scoring documents, best first.
  std::vector<std::pair<double, const Document*>> ranked(
      const std::string& query) const;

  std::vector<Document> corpus_;
  std::unordered_map<std::string, std::vector<std::uint32_t>> postings_;
  std::unordered_map<std::string, double> idf_;
};

}  // namespace dualsearch::retrieval
