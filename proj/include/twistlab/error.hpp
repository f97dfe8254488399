#ifndef TWISTLAB_ERROR_HPP
#define TWISTLAB_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace twistlab {

enum class ErrorCode {
  InvalidArgument,
  NotPrime,
  BudgetExceeded,
  NoIrreducibleFound,
  OrderNotDividing,
  DivisionByZero,
  BothZero,
  ZeroInput,
  ConstantInput,
  NonCoprimeClass,
  DegreeMismatch,
  TrivialConductor,
  ZeroDenominator,
  SingularCurve,
  ZeroJInvariant,
  NoMultiplicativePrime,
  NotAdditiveAtInfinity,
  NonMinimalModel,
  CacheCorrupt,
  InsufficientApTable,
  NonCoprimeConductor,
  IntegerDriftExceeded,
  FieldBudgetExceeded,
  InconsistentSign,
  AmbiguousSign,
  NonIntegralNewton,
  RootFinderNonConvergence,
  CalibrationMissing,
  SupportTooWide,
  PointCountFailure,
  ParseError,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the library carries one of the codes above so the
// CLI can map it onto an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace twistlab

#endif  // TWISTLAB_ERROR_HPP
