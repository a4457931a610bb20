#pragma once

#include <stdexcept>
#include <string>

namespace pickfactor {

// Failure categories surfaced by the library. The CLI maps input-shaped
// kinds to exit code 1 and no_convergence to exit code 2.
enum class ErrorKind {
  bad_input,
  degree_exceeded,
  space_mismatch,
  point_outside_ball,
  zero_polynomial,
  not_complete_pick,
  dimension_mismatch,
  coincident_points,
  budget_exceeded,
  not_extremal,
  degenerate_kernel,
  ratio_not_positive,
  empty_input,
  division_guard,
  bisection_failure,
  no_convergence,
};

std::string error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace pickfactor
