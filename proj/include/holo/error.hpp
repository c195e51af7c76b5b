#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace holo {

enum class ErrorCode {
  NonFiniteEvaluation,
  ToleranceNotReached,
  BranchJump,
  DegenerateLattice,
  EvaluationAtConePoint,
  ResidueSumNonzero,
  InvalidSpec,
  GaussBonnetViolation,
  ZeroDerivativeSample,
  NotIntegralPole,
  AllResiduesZero,
  NotTranslationSurface,
  InvalidTree,
  GenusUnsupported,
  UnstableConfiguration,
  NonFlatCharacter,
  MissingGeneratorValue,
  InvalidComplex,
  NonUnitaryCharacter,
  DegeneratePairing,
  StepCollision,
  NotInAdmissibleLocus,
  InvalidDirection,
  NewtonDivergence,
  ZeroKernel,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Domain error raised by every module. The code names the failure
/// category; the message carries the specifics.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace holo
