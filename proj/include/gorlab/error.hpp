#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gorlab {

/// Failure categories surfaced by the library. The CLI maps every kind to
/// exit status 2 (usage/validation) except where noted by the caller.
enum class ErrorKind {
  NotPrime,
  NotSymmetric,
  Degenerate,
  EmbeddingDimTooSmall,
  RingMismatch,
  ShapeMismatch,
  InvalidModule,
  NotCommutative,
  NotAssociative,
  CubeNotZero,
  SocleRankNot1,
  NotShortGorenstein,
  UnitIdeal,
  GeneratorInRadical,
  RadicalSquareNonzero,
  InsufficientDegree,
  ConfigError,
  SchemaError,
  ResourceLimit,
  IoError,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::EmbeddingDimTooSmall: return "EmbeddingDimTooSmall";
    case ErrorKind::RingMismatch: return "RingMismatch";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::InvalidModule: return "InvalidModule";
    case ErrorKind::NotCommutative: return "NotCommutative";
    case ErrorKind::NotAssociative: return "NotAssociative";
    case ErrorKind::CubeNotZero: return "CubeNotZero";
    case ErrorKind::SocleRankNot1: return "SocleRankNot1";
    case ErrorKind::NotShortGorenstein: return "NotShortGorenstein";
    case ErrorKind::UnitIdeal: return "UnitIdeal";
    case ErrorKind::GeneratorInRadical: return "GeneratorInRadical";
    case ErrorKind::RadicalSquareNonzero: return "RadicalSquareNonzero";
    case ErrorKind::InsufficientDegree: return "InsufficientDegree";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::ResourceLimit: return "ResourceLimit";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) +
                           (detail.empty() ? "" : ": " + detail)),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& detail = {}) {
  throw Error(kind, detail);
}

}  // namespace gorlab
