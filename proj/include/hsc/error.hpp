#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hsc {

enum class ErrorKind {
  InvalidInput,
  Domain,
  NumericalDegeneracy,
  IsolatedVertex,
  IsolatedPoint,
  InvalidPartition,
  DegenerateMetric,
  Parse,
  Io,
};

/// Library error. `stage()` is filled in by the pipelines when an error
/// escapes one of their stages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string stage = {})
      : std::runtime_error(message), kind_(kind), stage_(std::move(stage)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& stage() const noexcept { return stage_; }

 private:
  ErrorKind kind_;
  std::string stage_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

/// Degeneracy events (boundary clamps, zero rows, ...) collected during a run.
using Flags = std::vector<std::string>;

inline void raise_flag(Flags* flags, std::string what) {
  if (flags) flags->push_back(std::move(what));
}

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::NumericalDegeneracy: return "numerical-degeneracy";
    case ErrorKind::IsolatedVertex: return "isolated-vertex";
    case ErrorKind::IsolatedPoint: return "isolated-point";
    case ErrorKind::InvalidPartition: return "invalid-partition";
    case ErrorKind::DegenerateMetric: return "degenerate-metric";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace hsc
