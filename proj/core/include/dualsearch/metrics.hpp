#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace dualsearch::metrics {

/// Answer normalization: lowercase, strip punctuation, drop English
/// articles (a/an/the), collapse whitespace. Idempotent.
std::string normalize_answer(const std::string& answer);

/// Tokens of the normalized answer.
std::vector<std::string> normalized_tokens(const std::string& answer);

/// 1 if the normalized prediction exactly matches any normalized gold.
int exact_match(const std::string& pred, const std::vector<std::string>& golds);

/// Token-multiset F1 between the normalized prediction and each gold; the
/// maximum is returned. Both empty -> 1; exactly one empty -> 0.
double f1(const std::string& pred, const std::vector<std::string>& golds);

struct QuestionScore {
  std::string id;
  std::string prediction;
  double em = 0.0;
  double f1 = 0.0;
};

struct RunReport {
  double em_percent = 0.0;
  double f1_percent = 0.0;
  std::size_t count = 0;
  std::vector<QuestionScore> per_question;
};

/// Scores a predictions file ({id, answer, ...} records) against a gold
/// file ({id, ..., gold_answers} records). Every gold question must have a
/// prediction; throws MissingPredictions otherwise.
RunReport evaluate_run(const std::filesystem::path& predictions,
                       const std::filesystem::path& golds);

/// Writes the machine-readable report (JSON) next to a short human summary.
void write_report(const RunReport& report, const std::filesystem::path& path);

std::string summarize(const RunReport& report);

}  // namespace dualsearch::metrics
