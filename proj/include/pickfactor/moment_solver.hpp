#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "pickfactor/multi_poly.hpp"
#include "pickfactor/star_basis.hpp"

namespace pickfactor {

// Maximize Re g(0) over g = sum_j x_j b_j in an orthonormal basis {b_j},
// subject to <z^alpha g, g> = target m_alpha for every listed alpha and
// Im g(0) = 0. The constraints are real quadratic forms in the real and
// imaginary parts of x; the program is solved by multistart sequential
// quadratic programming (Newton KKT steps with an l1 exact-penalty line
// search and a penalty-descent fallback), preceded by Gauss-Newton
// feasibility restoration.
struct MomentProgram {
  const StarInvariantBasis* basis;
  std::map<MultiIndex, cplx, GradedLexLess> targets;
  double tol_moments = 1e-10;
  int restarts = 16;
  std::uint64_t seed = 0;
  // Extra initial coefficient vectors (in basis coordinates), tried in
  // addition to the seeded random restarts.
  std::vector<std::vector<cplx>> warm_starts;
};

struct SolveOutcome {
  std::vector<cplx> coeffs;  // basis coordinates of the winner
  MultiPoly g;               // winner as a polynomial, g(0) real
  double objective;          // Re g(0)
  double moment_residual;    // max_alpha |m_alpha(g) - target|
  bool feasible;             // moment_residual <= tol_moments
  int restarts_used;
};

SolveOutcome solve_moment_program(const MomentProgram& program);

}  // namespace pickfactor
