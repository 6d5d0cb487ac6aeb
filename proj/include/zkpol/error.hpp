#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zkpol {

enum class ErrorCode {
  InversionOfZero,
  OutOfRange,
  InvalidParams,
  PublicNeedsNoWire,
  StageViolation,
  UnknownWire,
  IncompleteWitness,
  EmptyMessage,
  InstanceError,
  DegenerateTriangle,
  ProtocolOrderViolation,
  InvalidScenario,
  GenerationFailed,
  Unsupported,
  ParseError,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace zkpol
