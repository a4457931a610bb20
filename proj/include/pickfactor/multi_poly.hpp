#pragma once

#include <map>

#include "pickfactor/kernel_space.hpp"

namespace pickfactor {

// Sparse polynomial in d commuting variables, tied to a kernel space.
// No zero coefficients are stored; term order is graded lexicographic,
// which makes iteration (and every serialization) deterministic.
class MultiPoly {
 public:
  using TermMap = std::map<MultiIndex, cplx, GradedLexLess>;

  explicit MultiPoly(KernelSpace space);
  static MultiPoly constant(const KernelSpace& space, cplx value);
  static MultiPoly monomial(const KernelSpace& space, const MultiIndex& alpha,
                            cplx coeff = cplx(1.0, 0.0));

  const KernelSpace& space() const { return space_; }
  const TermMap& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  // Max total degree with nonzero coefficient; 0 for the zero polynomial.
  int degree() const;

  cplx coeff(const MultiIndex& alpha) const;
  // Sets a coefficient (erases it when |value| == 0); degree must stay
  // within the space working degree.
  void set_coeff(const MultiIndex& alpha, cplx value);

  MultiPoly operator+(const MultiPoly& other) const;
  MultiPoly operator-(const MultiPoly& other) const;
  MultiPoly operator*(const MultiPoly& other) const;
  MultiPoly operator*(cplx scalar) const;

  cplx eval(const Point& z) const;

  // Largest |coefficient| difference against other.
  double max_coeff_diff(const MultiPoly& other) const;

 private:
  KernelSpace space_;
  TermMap terms_;
};

// <p, q> = sum_alpha p_hat(alpha) conj(q_hat(alpha)) ||z^alpha||^2.
cplx inner_product(const KernelSpace& space, const MultiPoly& p,
                   const MultiPoly& q);

inline double norm_sq(const KernelSpace& space, const MultiPoly& p) {
  return inner_product(space, p, p).real();
}

// Adjoint of multiplication by z^beta applied to f: the coefficient at
// alpha is f_hat(alpha+beta) ||z^{alpha+beta}||^2 / ||z^alpha||^2, so that
// <adjoint_monomial(beta, f), p> = <f, z^beta p> for admissible p.
MultiPoly adjoint_monomial(const KernelSpace& space, const MultiIndex& beta,
                           const MultiPoly& f);

// Operator norm of multiplication by phi from polynomials of degree <= N
// into degree <= N + deg phi, exact in the diagonal inner product.
// Non-decreasing in N and a lower bound for the multiplier norm.
double multiplier_compression_norm(const KernelSpace& space,
                                   const MultiPoly& phi, int N);

// sum_alpha f_hat(alpha) z^alpha, exact finite sum.
cplx eval_poly(const MultiPoly& f, const Point& z);

// Truncated kernel k_w as a polynomial: coefficient at alpha is
// a_{|alpha|} (|alpha|!/alpha!) conj(w)^alpha, |alpha| <= truncation.
MultiPoly truncated_kernel_poly(const KernelSpace& space, const Point& w,
                                int truncation);

}  // namespace pickfactor
