#pragma once

#include <stdexcept>
#include <string>

namespace metabalance {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A numeric value violated its declared bounds, integrality, or fixed pin.
struct BoundsError : Error {
  using Error::Error;
};

/// Two structures that must agree (labels, dimensions, shapes) do not.
struct StructureError : Error {
  using Error::Error;
};

/// An operation was applied in a state that forbids it (terminal game,
/// sleeping bot, empty history, ...).
struct StateError : Error {
  using Error::Error;
};

/// tell()/abandon() referenced a trial id that was never asked.
struct UnknownTrialError : Error {
  using Error::Error;
};

/// tell() was called twice for the same trial.
struct DoubleTellError : Error {
  using Error::Error;
};

/// tell() received a loss that is negative, NaN, or infinite.
struct InvalidLossError : Error {
  using Error::Error;
};

/// Configuration text could not be parsed or validated. Parse errors carry
/// a line number in the message.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace metabalance
