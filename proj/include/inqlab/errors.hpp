#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace inqlab {

/// An observed percept had probability zero under every member of the class,
/// so the true environment cannot be in the class.
class ImpossibleObservation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// KL divergence with an after-weight where the before-weight is zero.
class UndefinedDivergence : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Internal bookkeeping disagrees with itself (e.g. a registry entry that
/// should exist does not).
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An exhaustive enumeration was asked to exceed its scale guard.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Malformed input file. `line` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace inqlab
