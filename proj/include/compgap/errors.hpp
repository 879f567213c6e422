#pragma once

#include <stdexcept>
#include <string>

namespace compgap {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LengthError : Error {
  using Error::Error;
};

struct FormatError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct AttackerProtocolError : Error {
  using Error::Error;
};

struct SamplerError : Error {
  using Error::Error;
};

struct PreimageNotFound : Error {
  using Error::Error;
};

/// A bounded attacker asked for more oracle or hash calls than it was granted.
struct QueryBudgetExceeded : Error {
  using Error::Error;
};

/// Raised by harness checks when a shipped component breaks its own contract.
struct InvariantViolation : Error {
  using Error::Error;
};

}  // namespace compgap
