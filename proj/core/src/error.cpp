#include "confirm/error.hpp"

#include <sstream>

namespace confirm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DecompositionError: return "DecompositionError";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::Conflict: return "Conflict";
    case ErrorCode::BracketError: return "BracketError";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::Internal: return "Internal";
  }
  return "Internal";
}

namespace {
std::string decomposition_message(const std::string& component, double value) {
  std::ostringstream os;
  os.precision(6);
  os << "negative variance component " << component << " = " << value
     << " (inconsistent inputs or correlated intercept and trajectory)";
  return os.str();
}
}  // namespace

DecompositionError::DecompositionError(std::string component, double value)
    : Error(ErrorCode::DecompositionError, decomposition_message(component, value), component),
      component_(std::move(component)),
      value_(value) {}

}  // namespace confirm
