#pragma once

#include <stdexcept>
#include <string>

namespace qsat {

enum class ErrorCode {
  NotHermitian,
  NotPSD,
  NotRescaled,
  NotApplicable,
  DimensionMismatch,
  RankMismatch,
  NoEntangledBasisVector,
  NoSuchTerm,
  NotNatural,
  Inconsistent,
  DependentSeeds,
  GramSingular,
  FrustratedInput,
  FrustratedSubsystem,
  ObservableTooLarge,
  NotContiguous,
  InvalidConstants,
  InsufficientTrials,
  TooLarge,
  InvalidInput,
  IterationLimit,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace qsat
