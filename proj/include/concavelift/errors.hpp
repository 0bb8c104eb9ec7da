#pragma once

#include <stdexcept>
#include <string>

namespace clift {

// Failure codes shared between the core library, the C API and the CLI.
enum class ErrorCode {
  NotHermitian,
  NoConvergence,
  NotPSD,
  Singular,
  NotProjector,
  InvalidDepth,
  NotTower,
  LabelNotFound,
  DimensionMismatch,
  WindowTooDeep,
  SpaceMismatch,
  NotConcave,
  NotRegular,
  IsIsometric,
  InvalidMajorant,
  NotContraction,
  NotLeftInvertible,
  NotMonotone,
  HypothesisNotMet,
  PreconditionFailed,
  GammaTooSmall,
  GenerationFailed,
  UnknownGenerator,
  ParseError,
  InvalidArgument,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace clift
