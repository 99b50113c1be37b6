#ifndef SMOOTHLAB_ERRORS_HPP_
#define SMOOTHLAB_ERRORS_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace smoothlab {

// Bad arguments or configuration. The CLI maps this to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A query outside the range covered by a precomputed table.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

// Raised when an exact enumeration would exceed its configured cap.
class InfeasibleExact : public std::runtime_error {
 public:
  InfeasibleExact(const std::string& what, double bound)
      : std::runtime_error(what), bound_(bound) {}
  double bound() const noexcept { return bound_; }

 private:
  double bound_;
};

// Malformed cache or config file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace smoothlab

#endif  // SMOOTHLAB_ERRORS_HPP_
