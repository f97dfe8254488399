#include "twistlab/error.hpp"

namespace twistlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NoIrreducibleFound: return "NoIrreducibleFound";
    case ErrorCode::OrderNotDividing: return "OrderNotDividing";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::BothZero: return "BothZero";
    case ErrorCode::ZeroInput: return "ZeroInput";
    case ErrorCode::ConstantInput: return "ConstantInput";
    case ErrorCode::NonCoprimeClass: return "NonCoprimeClass";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::TrivialConductor: return "TrivialConductor";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::SingularCurve: return "SingularCurve";
    case ErrorCode::ZeroJInvariant: return "ZeroJInvariant";
    case ErrorCode::NoMultiplicativePrime: return "NoMultiplicativePrime";
    case ErrorCode::NotAdditiveAtInfinity: return "NotAdditiveAtInfinity";
    case ErrorCode::NonMinimalModel: return "NonMinimalModel";
    case ErrorCode::CacheCorrupt: return "CacheCorrupt";
    case ErrorCode::InsufficientApTable: return "InsufficientApTable";
    case ErrorCode::NonCoprimeConductor: return "NonCoprimeConductor";
    case ErrorCode::IntegerDriftExceeded: return "IntegerDriftExceeded";
    case ErrorCode::FieldBudgetExceeded: return "FieldBudgetExceeded";
    case ErrorCode::InconsistentSign: return "InconsistentSign";
    case ErrorCode::AmbiguousSign: return "AmbiguousSign";
    case ErrorCode::NonIntegralNewton: return "NonIntegralNewton";
    case ErrorCode::RootFinderNonConvergence: return "RootFinderNonConvergence";
    case ErrorCode::CalibrationMissing: return "CalibrationMissing";
    case ErrorCode::SupportTooWide: return "SupportTooWide";
    case ErrorCode::PointCountFailure: return "PointCountFailure";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace twistlab
