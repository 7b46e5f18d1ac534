#include "mahler/errors.hpp"

namespace mahler {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DegenerateBody: return "DegenerateBody";
    case ErrorKind::GenerationFailed: return "GenerationFailed";
    case ErrorKind::OutOfClass: return "OutOfClass";
    case ErrorKind::DegenerateInterval: return "DegenerateInterval";
    case ErrorKind::InvalidNeedle: return "InvalidNeedle";
    case ErrorKind::SearchFailed: return "SearchFailed";
    case ErrorKind::UnboundedBody: return "UnboundedBody";
    case ErrorKind::NormalizationFailed: return "NormalizationFailed";
    case ErrorKind::PlaneSearchFailed: return "PlaneSearchFailed";
    case ErrorKind::HalvingFailed: return "HalvingFailed";
    case ErrorKind::PancakeTooThick: return "PancakeTooThick";
    case ErrorKind::NotUnconditional: return "NotUnconditional";
    case ErrorKind::UnknownReference: return "UnknownReference";
  }
  return "Unknown";
}

}  // namespace mahler
