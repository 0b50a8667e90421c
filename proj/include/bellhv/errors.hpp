#pragma once

#include <stdexcept>
#include <string>

namespace bellhv {

// A weight wiped out every point of equilibrium mass (normalization Z = 0).
class DegenerateDistributionError : public std::runtime_error {
 public:
  explicit DegenerateDistributionError(const std::string& what)
      : std::runtime_error(what) {}
};

// An operation tied to one causal family was invoked on the other, e.g.
// transition-set detailed balance on a superdeterministic model.
class NotApplicableError : public std::logic_error {
 public:
  explicit NotApplicableError(const std::string& what)
      : std::logic_error(what) {}
};

// Telephone channel cannot carry information as configured (zero marginal gap,
// threshold outside the open interval between the two exact marginals, ...).
class ChannelError : public std::runtime_error {
 public:
  explicit ChannelError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bellhv
