#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace windfarm {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad configuration input. `field()` names the offending key (may be empty
/// for syntax errors), `line()` is 1-based or 0 when unknown.
class ConfigError : public Error {
public:
  ConfigError(const std::string& message, std::string field = {}, std::size_t line = 0)
      : Error(message), field_(std::move(field)), line_(line) {}

  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }

private:
  std::string field_;
  std::size_t line_;
};

/// Argument outside the mathematical domain of a model relation.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Non-finite intermediate inside the vector field.
class ModelError : public Error {
public:
  ModelError(const std::string& subsystem, const std::string& message)
      : Error(subsystem + ": " + message), subsystem_(subsystem) {}

  const std::string& subsystem() const noexcept { return subsystem_; }

private:
  std::string subsystem_;
};

class IntegrationError : public Error {
public:
  IntegrationError(const std::string& message, double time) : Error(message), time_(time) {}

  /// Last time at which the solution was known to be good.
  double time() const noexcept { return time_; }

private:
  double time_;
};

class StiffnessError : public IntegrationError {
public:
  StiffnessError(const std::string& message, double time, std::size_t component)
      : IntegrationError(message, time), component_(component) {}

  std::size_t component() const noexcept { return component_; }

private:
  std::size_t component_;
};

class DivergenceError : public IntegrationError {
public:
  using IntegrationError::IntegrationError;
};

class SteadyStateError : public Error {
public:
  SteadyStateError(const std::string& message, double residual)
      : Error(message), residual_(residual) {}

  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

}  // namespace windfarm
