#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace flagsurge {

enum class ErrorKind {
  ZeroVector,
  NonIncident,
  InvalidTube,
  EmptyRegion,
  Singular,
  IllConditioned,
  NotPositiveLoxodromic,
  NotLoxodromic,
  EmptySet,
  TooCloseToRepeller,
  BadTube,
  IndexOutOfRange,
  NoTermination,
  CertificateRequired,
  CenterMismatch,
  NoExponentFound,
  ConditionFailed,
  SwapParityError,
  DisjointnessViolation,
  MissingBouquetSamples,
  InvalidArgument,
  SceneInvalid,
};

std::string_view to_string(ErrorKind kind);

/// Base of every typed failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace flagsurge
