#include "zkpol/error.hpp"

namespace zkpol {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InversionOfZero: return "InversionOfZero";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::PublicNeedsNoWire: return "PublicNeedsNoWire";
    case ErrorCode::StageViolation: return "StageViolation";
    case ErrorCode::UnknownWire: return "UnknownWire";
    case ErrorCode::IncompleteWitness: return "IncompleteWitness";
    case ErrorCode::EmptyMessage: return "EmptyMessage";
    case ErrorCode::InstanceError: return "InstanceError";
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::ProtocolOrderViolation: return "ProtocolOrderViolation";
    case ErrorCode::InvalidScenario: return "InvalidScenario";
    case ErrorCode::GenerationFailed: return "GenerationFailed";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace zkpol
