#include "syzlab/errors.hpp"

namespace syzlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedFan: return "MalformedFan";
    case ErrorCode::NotAmple: return "NotAmple";
    case ErrorCode::ZeroCoordinate: return "ZeroCoordinate";
    case ErrorCode::NumericOverflow: return "NumericOverflow";
    case ErrorCode::OutsidePolytope: return "OutsidePolytope";
    case ErrorCode::BoundaryPoint: return "BoundaryPoint";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::OutsideGrid: return "OutsideGrid";
    case ErrorCode::NotExtendable: return "NotExtendable";
    case ErrorCode::Diverging: return "Diverging";
    case ErrorCode::Oscillating: return "Oscillating";
    case ErrorCode::EmptyStratum: return "EmptyStratum";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::ResidualTooLarge: return "ResidualTooLarge";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

bool Error::is_numerical() const noexcept {
  switch (code_) {
    case ErrorCode::NumericOverflow:
    case ErrorCode::OutsidePolytope:
    case ErrorCode::NoConvergence:
    case ErrorCode::Diverging:
    case ErrorCode::Oscillating:
    case ErrorCode::EmptyStratum:
    case ErrorCode::QuadratureFailure:
    case ErrorCode::SolverFailure:
    case ErrorCode::ResidualTooLarge:
      return true;
    default:
      return false;
  }
}

}  // namespace syzlab
