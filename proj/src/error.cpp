#include "flagsurge/error.hpp"

namespace flagsurge {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::NonIncident: return "NonIncident";
    case ErrorKind::InvalidTube: return "InvalidTube";
    case ErrorKind::EmptyRegion: return "EmptyRegion";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::NotPositiveLoxodromic: return "NotPositiveLoxodromic";
    case ErrorKind::NotLoxodromic: return "NotLoxodromic";
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::TooCloseToRepeller: return "TooCloseToRepeller";
    case ErrorKind::BadTube: return "BadTube";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::NoTermination: return "NoTermination";
    case ErrorKind::CertificateRequired: return "CertificateRequired";
    case ErrorKind::CenterMismatch: return "CenterMismatch";
    case ErrorKind::NoExponentFound: return "NoExponentFound";
    case ErrorKind::ConditionFailed: return "ConditionFailed";
    case ErrorKind::SwapParityError: return "SwapParityError";
    case ErrorKind::DisjointnessViolation: return "DisjointnessViolation";
    case ErrorKind::MissingBouquetSamples: return "MissingBouquetSamples";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SceneInvalid: return "SceneInvalid";
  }
  return "Unknown";
}

}  // namespace flagsurge
