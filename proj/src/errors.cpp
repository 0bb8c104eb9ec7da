#include "concavelift/errors.hpp"

namespace clift {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::NotProjector: return "NotProjector";
    case ErrorCode::InvalidDepth: return "InvalidDepth";
    case ErrorCode::NotTower: return "NotTower";
    case ErrorCode::LabelNotFound: return "LabelNotFound";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::WindowTooDeep: return "WindowTooDeep";
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::NotConcave: return "NotConcave";
    case ErrorCode::NotRegular: return "NotRegular";
    case ErrorCode::IsIsometric: return "IsIsometric";
    case ErrorCode::InvalidMajorant: return "InvalidMajorant";
    case ErrorCode::NotContraction: return "NotContraction";
    case ErrorCode::NotLeftInvertible: return "NotLeftInvertible";
    case ErrorCode::NotMonotone: return "NotMonotone";
    case ErrorCode::HypothesisNotMet: return "HypothesisNotMet";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::GammaTooSmall: return "GammaTooSmall";
    case ErrorCode::GenerationFailed: return "GenerationFailed";
    case ErrorCode::UnknownGenerator: return "UnknownGenerator";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

}  // namespace clift
