#pragma once

#include <stdexcept>
#include <string>

namespace fracnls {

/// Invalid user-supplied configuration (grid sizes, orders, hypotheses).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation was called outside its documented precondition.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The ray through u never crosses the Nehari manifold (u has no positive part).
class NoProjectionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A scalar root could not be bracketed within the allowed number of expansions.
class RefinementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fracnls
