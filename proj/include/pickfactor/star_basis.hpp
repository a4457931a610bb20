#pragma once

#include <vector>

#include "pickfactor/multi_poly.hpp"

namespace pickfactor {

// Orthonormal basis of the span of the adjoint-monomial images of f,
// span{ adjoint_monomial(beta, f) : |beta| <= deg f }. Every basis vector
// has degree <= deg f; rank is decided by singular values above
// 1e-10 * sigma_max.
struct StarInvariantBasis {
  KernelSpace space;
  MultiPoly source;
  std::vector<MultiPoly> vectors;
  int dimension;
};

StarInvariantBasis star_invariant_basis(const KernelSpace& space,
                                        const MultiPoly& f);

// Joint version over several source polynomials (same construction with
// all adjoint images pooled). Used by the vector factorizations.
StarInvariantBasis joint_star_invariant_basis(const KernelSpace& space,
                                              const std::vector<MultiPoly>& fs);

}  // namespace pickfactor
