#pragma once

#include <stdexcept>
#include <string>

namespace invscat {

enum class ErrorKind {
  Domain,
  GammaPole,
  NonConvergence,
  Overflow,
  NearZeroDenominator,
  InterpolationPole,
  BranchCut,
  NonHerglotz,
  TailFit,
  TailDivergence,
  SingularSystem,
  RowsMissing,
  IntegrationFailure,
  InvalidConfig,
  Parse,
};

const char* to_string(ErrorKind kind);

// Every library failure is reported through this type; `kind()` lets callers
// (the CLI in particular) map failures onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised by the pipeline; wraps a module failure with the stage it came from.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.kind(), stage + ": " + cause.what()), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace invscat
