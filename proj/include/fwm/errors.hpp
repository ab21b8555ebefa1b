#pragma once

#include <stdexcept>
#include <string>

namespace fwm {

/// Caller broke a documented precondition (bad mode index, mismatched
/// mode counts, non-unitary beam splitter, ...).
class ContractViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// The requested problem size exceeds the configured memory budget.
class ResourceError : public std::runtime_error {
public:
  ResourceError(const std::string& what, std::size_t limiting_dimension)
      : std::runtime_error(what), limiting_dimension_(limiting_dimension) {}

  std::size_t limiting_dimension() const noexcept { return limiting_dimension_; }

private:
  std::size_t limiting_dimension_;
};

/// A local-oscillator population entered a measured-quadrature denominator
/// while being below the configured floor, so the quadrature scaling is
/// ill-defined.
class DegenerateNormalization : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration; the message names the offending field.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace fwm
