#include "pickfactor/factorize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pickfactor/errors.hpp"
#include "pickfactor/moment_solver.hpp"
#include "pickfactor/rng.hpp"

namespace pickfactor {

namespace {

// Coordinates of p in an orthonormal basis.
std::vector<cplx> coordinates(const StarInvariantBasis& basis,
                              const MultiPoly& p) {
  std::vector<cplx> x(basis.vectors.size());
  for (std::size_t j = 0; j < basis.vectors.size(); ++j)
    x[j] = inner_product(basis.space, p, basis.vectors[j]);
  return x;
}

void rescale_to(std::vector<cplx>& x, double norm_sq_target) {
  double n2 = 0.0;
  for (const cplx& v : x) n2 += std::norm(v);
  if (n2 <= 0.0) return;
  const double s = std::sqrt(norm_sq_target / n2);
  for (cplx& v : x) v *= s;
}

// Warm starts for the moment program: the sources themselves plus a
// constant-direction seed, all scaled onto the norm sphere.
std::vector<std::vector<cplx>> make_warm_starts(
    const StarInvariantBasis& basis, const std::vector<MultiPoly>& sources,
    double m0) {
  std::vector<std::vector<cplx>> starts;
  for (const MultiPoly& f : sources) {
    std::vector<cplx> x = coordinates(basis, f);
    rescale_to(x, m0);
    starts.push_back(std::move(x));
  }
  std::vector<cplx> e =
      coordinates(basis, MultiPoly::constant(basis.space, cplx(1.0, 0.0)));
  double e2 = 0.0;
  for (const cplx& v : e) e2 += std::norm(v);
  if (e2 > 1e-20) {
    std::vector<cplx> pure = e;
    rescale_to(pure, m0);
    starts.push_back(pure);
    if (!starts.empty()) {
      std::vector<cplx> mixed = starts.front();
      for (std::size_t j = 0; j < mixed.size(); ++j) mixed[j] += pure[j];
      rescale_to(mixed, m0);
      starts.push_back(std::move(mixed));
    }
  }
  return starts;
}

SolveOutcome run_program(const StarInvariantBasis& basis,
                         const std::map<MultiIndex, cplx, GradedLexLess>& targets,
                         const std::vector<MultiPoly>& sources,
                         const FactorOptions& options) {
  MomentProgram program;
  program.basis = &basis;
  program.targets = targets;
  program.tol_moments = options.tol_moments;
  program.restarts = options.restarts;
  program.seed = options.seed;
  const MultiIndex zero(basis.space.dim(), 0);
  const auto it = targets.find(zero);
  const double m0 = it == targets.end() ? 1.0 : it->second.real();
  program.warm_starts = make_warm_starts(basis, sources, m0);
  return solve_moment_program(program);
}

// Power series of f / g to total degree max_degree; requires g(0) != 0.
MultiPoly series_divide(const KernelSpace& space, const MultiPoly& f,
                        const MultiPoly& g, int max_degree) {
  const MultiIndex zero(space.dim(), 0);
  const cplx g0 = g.coeff(zero);
  if (std::abs(g0) <= 1e-14)
    throw Error(ErrorKind::division_guard,
                "series division requires a nonzero constant term");
  MultiPoly q(space);
  for (const MultiIndex& alpha : indices_up_to(space.dim(), max_degree)) {
    cplx c = f.coeff(alpha);
    for (const auto& [beta, gb] : g.terms()) {
      if (order(beta) == 0) continue;
      MultiIndex rest;
      if (!subtract(alpha, beta, &rest)) continue;
      c -= gb * q.coeff(rest);
    }
    q.set_coeff(alpha, c / g0);
  }
  return q;
}

// max over probe polynomials h of sum_n ||phi_n h||^2 - ||h||^2, with
// phi_n = f_n / g expanded as a truncated power series.
double column_residual_check(const KernelSpace& space,
                             const std::vector<MultiPoly>& numerators,
                             const MultiPoly& g, const FactorOptions& options) {
  const int probe_deg = std::min(options.probe_degree, space.working_degree());
  const int series_deg = space.working_degree() - probe_deg;
  std::vector<MultiPoly> phis;
  phis.reserve(numerators.size());
  for (const MultiPoly& f : numerators)
    phis.push_back(series_divide(space, f, g, series_deg));

  std::vector<MultiPoly> probes;
  for (const MultiIndex& alpha : indices_up_to(space.dim(), probe_deg))
    probes.push_back(MultiPoly::monomial(space, alpha));
  Rng rng(options.seed ^ 0x9E3779B97F4A7C15ull);
  for (int r = 0; r < 4; ++r) {
    MultiPoly h(space);
    for (const MultiIndex& alpha : indices_up_to(space.dim(), probe_deg))
      h.set_coeff(alpha, rng.cnormal());
    probes.push_back(std::move(h));
  }

  double worst = -std::numeric_limits<double>::infinity();
  for (const MultiPoly& h : probes) {
    const double h2 = norm_sq(space, h);
    if (h2 <= 0.0) continue;
    double total = 0.0;
    for (const MultiPoly& phi : phis) total += norm_sq(space, phi * h);
    worst = std::max(worst, (total - h2) / h2);
  }
  return worst;
}

}  // namespace

FactorResult subinner_free_outer(const KernelSpace& space, const MultiPoly& f,
                                 const FactorOptions& options) {
  if (f.is_zero())
    throw Error(ErrorKind::zero_polynomial,
                "cannot factor the zero polynomial");
  if (2 * f.degree() > space.working_degree())
    throw Error(ErrorKind::degree_exceeded,
                "working degree too small for the moment constraints");

  const StarInvariantBasis basis = star_invariant_basis(space, f);
  const MomentProfile profile = moment_profile(space, f, f.degree());
  const SolveOutcome outcome =
      run_program(basis, profile.entries, {f}, options);

  const Point origin(space.dim(), cplx(0.0, 0.0));
  const double f_norm = std::sqrt(norm_sq(space, f));
  const double g_norm = std::sqrt(norm_sq(space, outcome.g));
  FactorResult result{
      outcome.g,
      KernelRatio(space, KernelRatio::Part(f), KernelRatio::Part(outcome.g)),
      std::abs(g_norm - f_norm),
      outcome.moment_residual,
      outcome.objective - std::abs(eval_poly(f, origin)),
      outcome.restarts_used,
      outcome.feasible};
  return result;
}

OuterCheck is_free_outer(const KernelSpace& space, const MultiPoly& f,
                         double tol, const FactorOptions& options) {
  FactorResult r = subinner_free_outer(space, f, options);
  return OuterCheck{r.gain <= tol, r.gain, std::move(r.outer), r.converged};
}

CommonFactorResult common_free_outer(const KernelSpace& space,
                                     const std::vector<MultiPoly>& fs,
                                     const FactorOptions& options) {
  if (fs.empty())
    throw Error(ErrorKind::empty_input, "family of polynomials is empty");
  std::vector<MultiPoly> nonzero;
  int max_deg = 0;
  for (const MultiPoly& f : fs) {
    if (f.is_zero()) continue;
    if (2 * f.degree() > space.working_degree())
      throw Error(ErrorKind::degree_exceeded,
                  "working degree too small for the moment constraints");
    max_deg = std::max(max_deg, f.degree());
    nonzero.push_back(f);
  }
  if (nonzero.empty())
    throw Error(ErrorKind::zero_polynomial, "all family members are zero");

  const StarInvariantBasis basis = joint_star_invariant_basis(space, nonzero);
  std::map<MultiIndex, cplx, GradedLexLess> targets;
  double total_norm_sq = 0.0;
  for (const MultiPoly& f : nonzero) {
    const MomentProfile profile = moment_profile(space, f, max_deg);
    for (const auto& [alpha, m] : profile.entries) targets[alpha] += m;
    total_norm_sq += profile.norm_sq;
  }

  const SolveOutcome outcome = run_program(basis, targets, nonzero, options);

  std::vector<KernelRatio> ratios;
  ratios.reserve(fs.size());
  for (const MultiPoly& f : fs)
    ratios.emplace_back(space, KernelRatio::Part(f),
                        KernelRatio::Part(outcome.g));

  double column = 0.0;
  bool column_ok = true;
  try {
    column = column_residual_check(space, nonzero, outcome.g, options);
  } catch (const Error&) {
    column = std::numeric_limits<double>::infinity();
    column_ok = false;
  }

  CommonFactorResult result{outcome.g,
                            std::move(ratios),
                            column,
                            outcome.moment_residual,
                            std::abs(std::sqrt(norm_sq(space, outcome.g)) -
                                     std::sqrt(total_norm_sq)),
                            outcome.restarts_used,
                            outcome.feasible && column_ok};
  return result;
}

WeakProductResult weak_product_factor(const KernelSpace& space,
                                      const MultiPoly& f1, const MultiPoly& f2,
                                      const FactorOptions& options) {
  if (f1.is_zero() || f2.is_zero())
    throw Error(ErrorKind::zero_polynomial,
                "weak-product factors must be nonzero");
  const MultiPoly g1 = f1 * cplx(1.0 / std::sqrt(norm_sq(space, f1)), 0.0);
  const MultiPoly g2 = f2 * cplx(1.0 / std::sqrt(norm_sq(space, f2)), 0.0);
  const MultiPoly h = g1 * g2;
  const MultiPoly s1 = (g1 + g2) * cplx(0.5, 0.0);
  const MultiPoly s2 = (g1 - g2) * cplx(0.0, 0.5);

  std::vector<MultiPoly> family;
  family.push_back(s1);
  family.push_back(s2);
  const CommonFactorResult common = common_free_outer(space, family, options);
  const MultiPoly& f = common.outer;

  // s1^2 + s2^2 = g1 g2 exactly; the rebuilt numerator is compared against
  // the direct product as a consistency residual.
  const MultiPoly numerator = s1 * s1 + s2 * s2;
  const double identity = numerator.max_coeff_diff(h);

  WeakProductResult result{
      KernelRatio(space, KernelRatio::Part(h), KernelRatio::Part(f * f)),
      f, norm_sq(space, f), identity, common.converged};
  return result;
}

ThroughFactorResult factor_through_subspace(const MultiPoly& f,
                                            const KernelSpace& space_k,
                                            const KernelSpace& space_s,
                                            const FactorOptions& options) {
  if (space_k.dim() != space_s.dim())
    throw Error(ErrorKind::dimension_mismatch,
                "spaces must share the ambient dimension");
  if (f.is_zero())
    throw Error(ErrorKind::zero_polynomial,
                "cannot factor the zero polynomial");
  if (!f.space().same_space(space_k))
    throw Error(ErrorKind::space_mismatch, "f must live in the source space");
  const int deg = f.degree();
  if (deg > space_s.working_degree() || 2 * deg > space_s.working_degree())
    throw Error(ErrorKind::degree_exceeded,
                "target working degree too small");

  // e solves (sum a^k_n t^n) = (sum e_n t^n)(sum a^s_n t^n); entries must
  // be nonnegative for the factorization to exist.
  std::vector<double> e(static_cast<std::size_t>(deg) + 1, 0.0);
  for (int n = 0; n <= deg; ++n) {
    double value = space_k.coeff(n);
    for (int j = 1; j <= n; ++j) value -= space_s.coeff(j) * e[n - j];
    if (value < -1e-14)
      throw Error(ErrorKind::ratio_not_positive,
                  "kernel ratio has a negative series coefficient");
    e[n] = std::max(value, 0.0);
  }

  ThroughFactorResult result{{},      {},    {}, MultiPoly(space_s),
                             KernelRatio(space_s,
                                         KernelRatio::Part(MultiPoly::constant(
                                             space_s, cplx(0.0, 0.0))),
                                         KernelRatio::Part(MultiPoly::constant(
                                             space_s, cplx(1.0, 0.0)))),
                             0.0,     0.0,   0.0, false};

  // g_mu = c_mu z^mu with c_mu = sqrt(e_{|mu|} |mu|!/mu!); component
  // f_mu has coefficient f_hat(mu+beta) c_mu a^s_{|beta|} (|beta|!/beta!)
  // ||z^{mu+beta}||^2_k at beta.
  std::vector<MultiPoly> components;
  for (const MultiIndex& mu : indices_up_to(space_k.dim(), deg)) {
    const int m_ord = order(mu);
    if (e[m_ord] <= 0.0) continue;
    const double c_mu = std::sqrt(e[m_ord] * multinomial(mu));
    MultiPoly f_mu(space_s);
    for (const auto& [gamma, fg] : f.terms()) {
      MultiIndex beta;
      if (!subtract(gamma, mu, &beta)) continue;
      const double weight = c_mu * space_s.coeff(order(beta)) *
                            multinomial(beta) *
                            monomial_norm_sq(space_k, gamma);
      f_mu.set_coeff(beta, fg * weight);
    }
    if (f_mu.is_zero()) continue;
    result.factor_indices.push_back(mu);
    result.factor_scales.push_back(c_mu);
    components.push_back(std::move(f_mu));
  }
  if (components.empty())
    throw Error(ErrorKind::zero_polynomial,
                "all factor components vanish");

  // Identity and norm checks: f = sum g_mu f_mu and
  // ||f||^2 = sum ||f_mu||^2.
  MultiPoly rebuilt(space_k);
  double component_norm_sq = 0.0;
  for (std::size_t i = 0; i < components.size(); ++i) {
    MultiPoly in_k(space_k);
    for (const auto& [beta, c] : components[i].terms())
      in_k.set_coeff(beta, c);
    rebuilt = rebuilt +
              MultiPoly::monomial(space_k, result.factor_indices[i],
                                  cplx(result.factor_scales[i], 0.0)) *
                  in_k;
    component_norm_sq += norm_sq(space_s, components[i]);
  }
  result.identity_residual = rebuilt.max_coeff_diff(f);
  result.sum_norm_residual =
      std::abs(component_norm_sq - norm_sq(space_k, f));

  const CommonFactorResult common =
      common_free_outer(space_s, components, options);
  result.outer = common.outer;
  result.column_residual = common.column_residual;
  result.components = std::move(components);

  MultiPoly numerator(space_s);
  for (const auto& [gamma, c] : rebuilt.terms()) numerator.set_coeff(gamma, c);
  result.phi = KernelRatio(space_s, KernelRatio::Part(numerator),
                           KernelRatio::Part(result.outer));
  result.converged = common.converged;
  return result;
}

std::vector<double> dirichlet_kaluza_coeffs(int n) {
  if (n < 1)
    throw Error(ErrorKind::bad_input, "need at least one coefficient");
  const auto a = [](int k) { return 1.0 / (k + 1); };
  std::vector<double> c(static_cast<std::size_t>(n), 0.0);
  for (int k = 1; k <= n; ++k) {
    double value = a(k);
    for (int j = 1; j < k; ++j) value -= c[j - 1] * a(k - j);
    c[k - 1] = value;
  }
  return c;
}

double dirichlet_truncated_radius(int n) {
  const std::vector<double> c = dirichlet_kaluza_coeffs(n);
  const auto h = [&](double r) {
    double value = -1.0;
    double p = 1.0;
    const double r2 = r * r;
    for (int k = 1; k <= n; ++k) {
      p *= r2;
      value += c[k - 1] * p;
    }
    return value;
  };
  double lo = 1.0;
  double hi = 2.0;
  if (h(lo) >= 0.0 || h(hi) <= 0.0)
    throw Error(ErrorKind::bisection_failure, "radius bracket failed");
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace pickfactor
