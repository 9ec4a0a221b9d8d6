#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace singcrit {

enum class ErrorCode {
  DivisionBySingular,
  SqrtOfNonpositive,
  OrderMismatch,
  OrderExceedsTruncation,
  SyntaxError,
  UnknownIdentifier,
  ArityError,
  NotCorankOne,
  NotOrthogonal,
  NotFrontal,
  NoSingularity,
  DegenerateSingularity,
  CurveDegenerate,
  ParallelismUnsolvable,
  NotSingular,
  DegenerateSecond,
  CurvatureVanishes,
  NotRegular,
  PreconditionFailed,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DivisionBySingular: return "DivisionBySingular";
    case ErrorCode::SqrtOfNonpositive: return "SqrtOfNonpositive";
    case ErrorCode::OrderMismatch: return "OrderMismatch";
    case ErrorCode::OrderExceedsTruncation: return "OrderExceedsTruncation";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorCode::ArityError: return "ArityError";
    case ErrorCode::NotCorankOne: return "NotCorankOne";
    case ErrorCode::NotOrthogonal: return "NotOrthogonal";
    case ErrorCode::NotFrontal: return "NotFrontal";
    case ErrorCode::NoSingularity: return "NoSingularity";
    case ErrorCode::DegenerateSingularity: return "DegenerateSingularity";
    case ErrorCode::CurveDegenerate: return "CurveDegenerate";
    case ErrorCode::ParallelismUnsolvable: return "ParallelismUnsolvable";
    case ErrorCode::NotSingular: return "NotSingular";
    case ErrorCode::DegenerateSecond: return "DegenerateSecond";
    case ErrorCode::CurvatureVanishes: return "CurvatureVanishes";
    case ErrorCode::NotRegular: return "NotRegular";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library. `position` is the 0-based column in
/// the parsed text when the error originates from (or passes through) an
/// expression.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> position = std::nullopt)
      : std::runtime_error(compose(code, message, position)),
        code_(code),
        detail_(message),
        position_(position) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }
  std::optional<std::size_t> position() const noexcept { return position_; }

 private:
  static std::string compose(ErrorCode code, const std::string& message,
                             std::optional<std::size_t> position) {
    std::string text(to_string(code));
    if (!message.empty()) text += ": " + message;
    if (position) text += " (at column " + std::to_string(*position) + ")";
    return text;
  }

  ErrorCode code_;
  std::string detail_;
  std::optional<std::size_t> position_;
};

}  // namespace singcrit
