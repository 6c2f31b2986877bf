#ifndef UNCLAB_ERRORS_HPP
#define UNCLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace unclab {

/// Invalid input: bad configuration values, violated preconditions,
/// malformed probability tables. Maps to CLI exit code 2.
class validation_error : public std::invalid_argument {
 public:
  explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Numerical failure during an otherwise valid computation (rank deficiency,
/// non-finite intermediate, no convergence). Maps to CLI exit code 3.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem failure while emitting artifacts. Maps to CLI exit code 4.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace unclab

#endif  // UNCLAB_ERRORS_HPP
