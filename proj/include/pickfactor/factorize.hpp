#pragma once

#include <cstdint>
#include <vector>

#include "pickfactor/kernel_ratio.hpp"
#include "pickfactor/moments.hpp"
#include "pickfactor/star_basis.hpp"

namespace pickfactor {

struct FactorOptions {
  double tol_moments = 1e-10;
  int restarts = 16;
  std::uint64_t seed = 0;
  int probe_degree = 4;  // degree of test polynomials for residual checks
};

// Output of the subinner / free outer factorization f = phi * g:
// g maximizes Re g(0) within the vector-state class of f (searched over
// the star-invariant span), g(0) real > 0, phi = f / g as an exact ratio.
struct FactorResult {
  MultiPoly outer;
  KernelRatio subinner;
  double norm_match;       // | ||g|| - ||f|| |
  double moment_residual;  // max_alpha |m_alpha(g) - m_alpha(f)|
  double gain;             // g(0) - |f(0)|
  int restarts_used;
  bool converged;
};

FactorResult subinner_free_outer(const KernelSpace& space, const MultiPoly& f,
                                 const FactorOptions& options = {});

struct OuterCheck {
  bool outer;        // gain <= tol
  double gain;
  MultiPoly witness; // the computed maximizer g
  bool converged;
};

OuterCheck is_free_outer(const KernelSpace& space, const MultiPoly& f,
                         double tol = 1e-8, const FactorOptions& options = {});

// Common free outer factor g of a finite family: maximizes Re g(0) with
// m_alpha(g) = sum_n m_alpha(f_n), searched over the joint star-invariant
// span. column_residual is max over probe polynomials h of
// sum_n ||phi_n h||^2 - ||h||^2 (expected <= 0 up to tolerance).
struct CommonFactorResult {
  MultiPoly outer;
  std::vector<KernelRatio> ratios;
  double column_residual;
  double moment_residual;
  double norm_match;
  int restarts_used;
  bool converged;
};

CommonFactorResult common_free_outer(const KernelSpace& space,
                                     const std::vector<MultiPoly>& fs,
                                     const FactorOptions& options = {});

// Weak-product factorization h = phi f^2 of h = f1 f2 / (||f1|| ||f2||):
// splits the normalized factors as (g1+g2)/2 and i(g1-g2)/2, takes their
// common free outer factor f, and returns phi = (f1'^2 + f2'^2) / f^2.
struct WeakProductResult {
  KernelRatio phi;
  MultiPoly outer;          // f
  double outer_norm_sq;     // ||f||^2
  double identity_residual; // max coefficient error of h = phi f^2
  bool converged;
};

WeakProductResult weak_product_factor(const KernelSpace& space,
                                      const MultiPoly& f1, const MultiPoly& f2,
                                      const FactorOptions& options = {});

// Factorization of f in H_k through a space H_s whose kernel divides k:
// with e the coefficient series of k/s (entrywise nonnegative), the factor
// functions are g_mu = sqrt(e_{|mu|} |mu|!/mu!) z^mu, the components are
// f_mu(w) = <f, g_mu s_w>, g is their common free outer factor in H_s and
// phi = (sum_mu g_mu f_mu) / g satisfies f = phi g.
struct ThroughFactorResult {
  std::vector<MultiIndex> factor_indices;
  std::vector<double> factor_scales;
  std::vector<MultiPoly> components;  // f_mu, in the target space H_s
  MultiPoly outer;                    // g in H_s
  KernelRatio phi;                    // numerator sum g_mu f_mu, denominator g
  double sum_norm_residual;           // | sum ||f_mu||^2 - ||f||^2 |
  double identity_residual;           // max coeff error of f = sum g_mu f_mu
  double column_residual;
  bool converged;
};

ThroughFactorResult factor_through_subspace(const MultiPoly& f,
                                            const KernelSpace& space_k,
                                            const KernelSpace& space_s,
                                            const FactorOptions& options = {});

// Zero-free radius of degree-n free outer polynomials in the Dirichlet
// space: inverts the kernel series a_k = 1/(k+1) into positive c_k with
// sum a_n t^n = 1 / (1 - sum c_k t^k) and returns the unique R > 1 with
// sum_{k<=n} c_k R^{2k} = 1 (bisection to 1e-12). Strictly decreasing in
// n with limit 1.
double dirichlet_truncated_radius(int n);

// The c_1..c_n of the inversion above (index 0 holds c_1).
std::vector<double> dirichlet_kaluza_coeffs(int n);

}  // namespace pickfactor
