#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ivtree {

enum class ErrorCode {
  NonPositiveTemperature,
  TreeOrderTooSmall,
  NonFiniteInput,
  WeightOverflow,
  MissingVertex,
  InvalidSpin,
  IndexOutOfRange,
  NonPositiveArgument,
  FieldOverflow,
  ParityMismatch,
  NonPositiveSum,
  NotAFixedPoint,
  EnumerationTooLarge,
  InvalidDepth,
  SameIndicator,
  InvalidAxis,
  InvalidFieldVector,
  MapOverflow,
};

std::string_view to_string(ErrorCode code);

// Every precondition violation in the library surfaces as this exception; the
// code lets callers (the CLI in particular) map failures without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ivtree
