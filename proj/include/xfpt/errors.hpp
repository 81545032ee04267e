#pragma once

#include <stdexcept>
#include <string>

namespace xfpt {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A request the library deliberately does not answer (e.g. the k>=2 Gumbel limit).
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Solver failure, unresolved curve, or a precondition on numerical data.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed configuration input.  `key()` names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace xfpt
