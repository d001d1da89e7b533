#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace confirm {

/// Error taxonomy shared by every module. The service layer maps these onto
/// wire-level error codes one-to-one (Bracket and NotApplicable are internal
/// conditions and surface as Internal / DomainError respectively).
enum class ErrorCode {
  ParseError,
  DomainError,
  DecompositionError,
  Infeasible,
  NotFound,
  Conflict,
  BracketError,
  NotApplicable,
  TooLarge,
  Internal,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string field_path = {})
      : std::runtime_error(message), code_(code), field_path_(std::move(field_path)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& field_path() const noexcept { return field_path_; }

 private:
  ErrorCode code_;
  std::string field_path_;
};

class ParseError : public Error {
 public:
  ParseError(std::string field_path, const std::string& message)
      : Error(ErrorCode::ParseError, message, std::move(field_path)) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message, std::string field_path = {})
      : Error(ErrorCode::DomainError, message, std::move(field_path)) {}
};

/// A decomposed variance component came out negative.
class DecompositionError : public Error {
 public:
  DecompositionError(std::string component, double value);

  const std::string& component() const noexcept { return component_; }
  double value() const noexcept { return value_; }

 private:
  std::string component_;
  double value_;
};

class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& message)
      : Error(ErrorCode::Infeasible, message) {}
};

class NotFoundError : public Error {
 public:
  explicit NotFoundError(const std::string& message)
      : Error(ErrorCode::NotFound, message) {}
};

class ConflictError : public Error {
 public:
  explicit ConflictError(const std::string& message)
      : Error(ErrorCode::Conflict, message) {}
};

class BracketError : public Error {
 public:
  explicit BracketError(const std::string& message)
      : Error(ErrorCode::BracketError, message) {}
};

class NotApplicableError : public Error {
 public:
  explicit NotApplicableError(const std::string& message)
      : Error(ErrorCode::NotApplicable, message) {}
};

class TooLargeError : public Error {
 public:
  explicit TooLargeError(const std::string& message)
      : Error(ErrorCode::TooLarge, message) {}
};

}  // namespace confirm
