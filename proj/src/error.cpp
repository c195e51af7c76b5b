#include "holo/error.hpp"

namespace holo {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonFiniteEvaluation: return "NonFiniteEvaluation";
    case ErrorCode::ToleranceNotReached: return "ToleranceNotReached";
    case ErrorCode::BranchJump: return "BranchJump";
    case ErrorCode::DegenerateLattice: return "DegenerateLattice";
    case ErrorCode::EvaluationAtConePoint: return "EvaluationAtConePoint";
    case ErrorCode::ResidueSumNonzero: return "ResidueSumNonzero";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::GaussBonnetViolation: return "GaussBonnetViolation";
    case ErrorCode::ZeroDerivativeSample: return "ZeroDerivativeSample";
    case ErrorCode::NotIntegralPole: return "NotIntegralPole";
    case ErrorCode::AllResiduesZero: return "AllResiduesZero";
    case ErrorCode::NotTranslationSurface: return "NotTranslationSurface";
    case ErrorCode::InvalidTree: return "InvalidTree";
    case ErrorCode::GenusUnsupported: return "GenusUnsupported";
    case ErrorCode::UnstableConfiguration: return "UnstableConfiguration";
    case ErrorCode::NonFlatCharacter: return "NonFlatCharacter";
    case ErrorCode::MissingGeneratorValue: return "MissingGeneratorValue";
    case ErrorCode::InvalidComplex: return "InvalidComplex";
    case ErrorCode::NonUnitaryCharacter: return "NonUnitaryCharacter";
    case ErrorCode::DegeneratePairing: return "DegeneratePairing";
    case ErrorCode::StepCollision: return "StepCollision";
    case ErrorCode::NotInAdmissibleLocus: return "NotInAdmissibleLocus";
    case ErrorCode::InvalidDirection: return "InvalidDirection";
    case ErrorCode::NewtonDivergence: return "NewtonDivergence";
    case ErrorCode::ZeroKernel: return "ZeroKernel";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace holo
