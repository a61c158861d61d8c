#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wavecho {

enum class ErrorKind {
  InvalidCode,
  EmptyNetwork,
  UnsupportedTopology,
  Shape,
  DegenerateSpectrum,
  Configuration,
  NumericInput,
  InconsistentSpectrum,
  InvalidRegularizer,
  DowndateSingularity,
  InsufficientData,
  Divergence,
  InvalidSeaState,
  Resolution,
  Drying,
  BlowUp,
  Instability,
  Io,
  Usage,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for all library failures; `kind()` lets callers branch
/// without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace wavecho
