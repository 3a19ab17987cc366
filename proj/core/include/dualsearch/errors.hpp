#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dualsearch {

/// Base class for all dualsearch errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Tree errors.
class UnknownNode : public Error {
public:
  using Error::Error;
};
class UnknownParent : public Error {
public:
  using Error::Error;
};
class ParentIsTerminal : public Error {
public:
  using Error::Error;
};
class RewardOutOfRange : public Error {
public:
  using Error::Error;
};

/// Malformed serialized input; the message carries position diagnostics
/// (byte offset or node index) where available.
class MalformedStream : public Error {
public:
  using Error::Error;
};

// Agent/backend errors.
class ParseFailure : public Error {
public:
  using Error::Error;
};
class BackendUnavailable : public Error {
public:
  using Error::Error;
};
class AllSamplesUnparseable : public Error {
public:
  using Error::Error;
};

// Retrieval errors.
class EmptyCorpus : public Error {
public:
  using Error::Error;
};

// Value model errors.
class LengthMismatch : public Error {
public:
  using Error::Error;
};

// MCTS errors.
class InvalidCounts : public Error {
public:
  using Error::Error;
};
class TreeExhausted : public Error {
public:
  using Error::Error;
};

// Synthetic world errors.
class InfeasibleSpec : public Error {
public:
  using Error::Error;
};

// Evaluation errors.
class MissingPredictions : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

/// Configuration validation failure; `violations()` lists every violated
/// field, one message each.
class ValidationError : public Error {
public:
  explicit ValidationError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const { return violations_; }

private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "configuration invalid:";
    for (const auto& m : v) {
      out += "\n  - " + m;
    }
    return out;
  }

  std::vector<std::string> violations_;
};

}  // namespace dualsearch
