#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ivopt {

enum class ErrorKind {
  NonPositiveDefinite,
  OffManifold,
  BaseMismatch,
  SyntaxError,
  UnknownFunction,
  UnknownFeature,
  DomainError,
  NonFinite,
  NegativeWidth,
  NotConverged,
  SamplerExhausted,
  InfeasibleCandidate,
  ModeMismatch,
  InvalidArgument,
  ConfigError,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonPositiveDefinite: return "NonPositiveDefinite";
    case ErrorKind::OffManifold: return "OffManifold";
    case ErrorKind::BaseMismatch: return "BaseMismatch";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownFunction: return "UnknownFunction";
    case ErrorKind::UnknownFeature: return "UnknownFeature";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NegativeWidth: return "NegativeWidth";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::SamplerExhausted: return "SamplerExhausted";
    case ErrorKind::InfeasibleCandidate: return "InfeasibleCandidate";
    case ErrorKind::ModeMismatch: return "ModeMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Base exception for every failure raised by the library. `kind()` lets
/// callers branch without a cascade of catch clauses.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failure with the byte offset into the source text and the set of
/// tokens the parser would have accepted there.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, std::string message, std::vector<std::string> expected)
      : Error(ErrorKind::SyntaxError,
              "at offset " + std::to_string(offset) + ": " + message + describe(expected)),
        offset_(offset),
        message_(std::move(message)),
        expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& message() const noexcept { return message_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  static std::string describe(const std::vector<std::string>& expected) {
    if (expected.empty()) return {};
    std::string out = " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) out += ", ";
      out += expected[i];
    }
    return out + ")";
  }

  std::size_t offset_;
  std::string message_;
  std::vector<std::string> expected_;
};

}  // namespace ivopt
