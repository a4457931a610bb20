#include "pickfactor/errors.hpp"

namespace pickfactor {

std::string error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::bad_input: return "bad_input";
    case ErrorKind::degree_exceeded: return "degree_exceeded";
    case ErrorKind::space_mismatch: return "space_mismatch";
    case ErrorKind::point_outside_ball: return "point_outside_ball";
    case ErrorKind::zero_polynomial: return "zero_polynomial";
    case ErrorKind::not_complete_pick: return "not_complete_pick";
    case ErrorKind::dimension_mismatch: return "dimension_mismatch";
    case ErrorKind::coincident_points: return "coincident_points";
    case ErrorKind::budget_exceeded: return "budget_exceeded";
    case ErrorKind::not_extremal: return "not_extremal";
    case ErrorKind::degenerate_kernel: return "degenerate_kernel";
    case ErrorKind::ratio_not_positive: return "ratio_not_positive";
    case ErrorKind::empty_input: return "empty_input";
    case ErrorKind::division_guard: return "division_guard";
    case ErrorKind::bisection_failure: return "bisection_failure";
    case ErrorKind::no_convergence: return "no_convergence";
  }
  return "unknown";
}

}  // namespace pickfactor
