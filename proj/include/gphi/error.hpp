#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gphi {

enum class ErrorCode {
  NotSquare,
  NonFiniteEntry,
  TooManyPoints,
  AsymmetricMatrix,
  NegativeEntry,
  ZeroOffDiagonal,
  NonzeroDiagonal,
  ConstantTooSmall,
  InvalidInterval,
  PointOutOfDomain,
  EmptySequence,
  TailLongerThanSequence,
  NonpositiveRadius,
  NonpositiveArgument,
  InvalidParameter,
  EmptyGrid,
  NotStrictlyIncreasing,
  NoValidEpsilon,
  BudgetExhausted,
  NotSelfMap,
  ModeUnsupported,
  PsiNotNondecreasing,
  NotInvertible,
  DomainRestricted,
  OrbitTooShort,
  TailNotSmall,
  ConfigInvalid,
  MalformedInput,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace gphi
