#pragma once

#include <functional>

#include "pickfactor/kernel_ratio.hpp"
#include "pickfactor/multi_poly.hpp"

namespace pickfactor {

// Vector-state moments m_alpha = <z^alpha f, f> for |alpha| <= order.
// m_0 = ||f||^2; for polynomial f the entries vanish for |alpha| > deg f,
// so order = deg f is a complete fingerprint.
struct MomentProfile {
  KernelSpace space;
  int order;
  std::map<MultiIndex, cplx, GradedLexLess> entries;
  double norm_sq;

  cplx at(const MultiIndex& alpha) const;
};

MomentProfile moment_profile(const KernelSpace& space, const MultiPoly& f,
                             int order);

// Power series of V_f(z) = 2 <f, k_z f> - ||f||^2: constant term ||f||^2,
// coefficient at alpha != 0 equal to 2 a_{|alpha|} (|alpha|!/alpha!)
// conj(m_alpha).
struct SarasonSeries {
  KernelSpace space;
  MultiPoly series;
};

SarasonSeries sarason_series(const KernelSpace& space, const MultiPoly& f,
                             int order);

struct StateEquality {
  bool equal;
  double max_residual;
};

// Compares moment profiles up to order max(deg f, deg g).
StateEquality vector_state_equal(const KernelSpace& space, const MultiPoly& f,
                                 const MultiPoly& g, double tol);

// Smallest c >= 0 making [(c^2 - phi(z_i) conj(phi(z_j))) k_{z_i}(z_j)]
// positive semidefinite over the pair {z, w}; a lower bound for the
// multiplier norm of phi. Bisection to 1e-10 on c, PSD threshold
// -1e-12 * trace on the smallest eigenvalue.
double two_point_certificate(const KernelSpace& space,
                             const std::function<cplx(const Point&)>& phi,
                             const Point& z, const Point& w, int truncation);
double two_point_certificate(const KernelSpace& space, const MultiPoly& phi,
                             const Point& z, const Point& w, int truncation);
double two_point_certificate(const KernelSpace& space, const KernelRatio& phi,
                             const Point& z, const Point& w, int truncation);

}  // namespace pickfactor
