#include "gphi/error.hpp"

namespace gphi {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::TooManyPoints: return "TooManyPoints";
    case ErrorCode::AsymmetricMatrix: return "AsymmetricMatrix";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::ZeroOffDiagonal: return "ZeroOffDiagonal";
    case ErrorCode::NonzeroDiagonal: return "NonzeroDiagonal";
    case ErrorCode::ConstantTooSmall: return "ConstantTooSmall";
    case ErrorCode::InvalidInterval: return "InvalidInterval";
    case ErrorCode::PointOutOfDomain: return "PointOutOfDomain";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::TailLongerThanSequence: return "TailLongerThanSequence";
    case ErrorCode::NonpositiveRadius: return "NonpositiveRadius";
    case ErrorCode::NonpositiveArgument: return "NonpositiveArgument";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::NotStrictlyIncreasing: return "NotStrictlyIncreasing";
    case ErrorCode::NoValidEpsilon: return "NoValidEpsilon";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::NotSelfMap: return "NotSelfMap";
    case ErrorCode::ModeUnsupported: return "ModeUnsupported";
    case ErrorCode::PsiNotNondecreasing: return "PsiNotNondecreasing";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::DomainRestricted: return "DomainRestricted";
    case ErrorCode::OrbitTooShort: return "OrbitTooShort";
    case ErrorCode::TailNotSmall: return "TailNotSmall";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::MalformedInput: return "MalformedInput";
  }
  return "Unknown";
}

}  // namespace gphi
