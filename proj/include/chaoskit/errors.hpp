#pragma once

#include <stdexcept>
#include <string>

namespace chaoskit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An invalid configuration value. `field()` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A point that does not belong to the system's state space.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A request for an iterate index or block boundary beyond horizon_cap.
class HorizonExceeded : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Too few samples to form an estimate (e.g. a short subsampled profile).
class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// The operation is not defined for this system (e.g. transitivity on an unbounded space).
class Unsupported : public Error {
 public:
  using Error::Error;
};

}  // namespace chaoskit
