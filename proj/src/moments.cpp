#include "pickfactor/moments.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace pickfactor {

cplx MomentProfile::at(const MultiIndex& alpha) const {
  auto it = entries.find(alpha);
  return it == entries.end() ? cplx(0.0, 0.0) : it->second;
}

MomentProfile moment_profile(const KernelSpace& space, const MultiPoly& f,
                             int order) {
  if (!space.same_space(f.space()))
    throw Error(ErrorKind::space_mismatch, "polynomial space mismatch");
  if (order < 0) throw Error(ErrorKind::bad_input, "order must be >= 0");
  const int df = f.is_zero() ? 0 : f.degree();
  if (df + order > space.working_degree())
    throw Error(ErrorKind::degree_exceeded,
                "moment order plus degree exceeds the working degree");
  MomentProfile profile{space, order, {}, 0.0};
  for (const MultiIndex& alpha : indices_up_to(space.dim(), order)) {
    // m_alpha = <z^alpha f, f> = sum_beta f_hat(beta) conj(f_hat(alpha+beta))
    // ||z^{alpha+beta}||^2.
    cplx m(0.0, 0.0);
    for (const auto& [beta, c] : f.terms()) {
      const cplx top = f.coeff(add(alpha, beta));
      if (top == cplx(0.0, 0.0)) continue;
      m += c * std::conj(top) * monomial_norm_sq(space, add(alpha, beta));
    }
    profile.entries[alpha] = m;
  }
  profile.norm_sq = profile.entries[MultiIndex(space.dim(), 0)].real();
  return profile;
}

SarasonSeries sarason_series(const KernelSpace& space, const MultiPoly& f,
                             int max_order) {
  const MomentProfile profile = moment_profile(space, f, max_order);
  MultiPoly series(space);
  for (const auto& [alpha, m] : profile.entries) {
    const int n = order(alpha);
    if (n == 0) {
      series.set_coeff(alpha, cplx(profile.norm_sq, 0.0));
    } else {
      const cplx c =
          2.0 * space.coeff(n) * multinomial(alpha) * std::conj(m);
      if (c != cplx(0.0, 0.0)) series.set_coeff(alpha, c);
    }
  }
  return {space, series};
}

StateEquality vector_state_equal(const KernelSpace& space, const MultiPoly& f,
                                 const MultiPoly& g, double tol) {
  const int df = f.is_zero() ? 0 : f.degree();
  const int dg = g.is_zero() ? 0 : g.degree();
  const int ord = std::max(df, dg);
  const MomentProfile pf = moment_profile(space, f, ord);
  const MomentProfile pg = moment_profile(space, g, ord);
  double max_residual = 0.0;
  for (const auto& [alpha, m] : pf.entries)
    max_residual = std::max(max_residual, std::abs(m - pg.at(alpha)));
  return {max_residual <= tol, max_residual};
}

double two_point_certificate(const KernelSpace& space,
                             const std::function<cplx(const Point&)>& phi,
                             const Point& z, const Point& w, int truncation) {
  space.require_in_ball(z);
  space.require_in_ball(w);
  double dist2 = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) dist2 += std::norm(z[j] - w[j]);
  if (dist2 <= 1e-24)
    throw Error(ErrorKind::coincident_points,
                "certificate requires two distinct points");

  const cplx pz = phi(z);
  const cplx pw = phi(w);
  Eigen::Matrix2cd K;
  K(0, 0) = kernel_eval(space, z, z, truncation).value;
  K(0, 1) = kernel_eval(space, z, w, truncation).value;
  K(1, 0) = kernel_eval(space, w, z, truncation).value;
  K(1, 1) = kernel_eval(space, w, w, truncation).value;
  Eigen::Matrix2cd B;
  B(0, 0) = pz * std::conj(pz) * K(0, 0);
  B(0, 1) = pz * std::conj(pw) * K(0, 1);
  B(1, 0) = pw * std::conj(pz) * K(1, 0);
  B(1, 1) = pw * std::conj(pw) * K(1, 1);

  const auto min_eig = [&](double c) {
    Eigen::Matrix2cd M = c * c * K - B;
    M = 0.5 * (M + M.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(M);
    const double psd_tol = 1e-12 * std::abs(M.trace().real());
    return es.eigenvalues()(0) + psd_tol;
  };

  if (min_eig(0.0) >= 0.0) return 0.0;
  double hi = 1.0;
  while (min_eig(hi) < 0.0) {
    hi *= 2.0;
    if (hi > 1e8)
      throw Error(ErrorKind::bisection_failure,
                  "certificate bisection upper bound not found");
  }
  double lo = 0.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (min_eig(mid) >= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double two_point_certificate(const KernelSpace& space, const MultiPoly& phi,
                             const Point& z, const Point& w, int truncation) {
  return two_point_certificate(
      space, [&](const Point& p) { return eval_poly(phi, p); }, z, w,
      truncation);
}

double two_point_certificate(const KernelSpace& space, const KernelRatio& phi,
                             const Point& z, const Point& w, int truncation) {
  return two_point_certificate(
      space, [&](const Point& p) { return phi.eval(p); }, z, w, truncation);
}

}  // namespace pickfactor
