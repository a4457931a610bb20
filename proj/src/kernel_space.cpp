#include "pickfactor/kernel_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pickfactor {

namespace {

constexpr double kBallTol = 1e-14;

bool kaluza_holds(const std::vector<double>& a) {
  // a_n / a_{n+1} non-increasing, up to roundoff.
  double prev = a.size() > 1 ? a[0] / a[1] : 1.0;
  for (std::size_t n = 1; n + 1 < a.size(); ++n) {
    const double ratio = a[n] / a[n + 1];
    if (ratio > prev * (1.0 + 1e-12)) return false;
    prev = ratio;
  }
  return true;
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::hardy: return "hardy";
    case Family::dirichlet: return "dirichlet";
    case Family::d_alpha: return "d_alpha";
    case Family::drury_arveson: return "drury_arveson";
    case Family::custom: return "custom";
  }
  return "custom";
}

Family family_from_name(const std::string& name) {
  if (name == "hardy") return Family::hardy;
  if (name == "dirichlet") return Family::dirichlet;
  if (name == "d_alpha") return Family::d_alpha;
  if (name == "drury_arveson") return Family::drury_arveson;
  if (name == "custom") return Family::custom;
  throw Error(ErrorKind::bad_input, "unknown kernel family: " + name);
}

KernelSpace::KernelSpace(Family family, double alpha, int dim,
                         int working_degree, std::vector<double> coeffs)
    : family_(family),
      alpha_(alpha),
      dim_(dim),
      working_degree_(working_degree),
      coeffs_(std::move(coeffs)) {
  if (dim_ < 1) throw Error(ErrorKind::bad_input, "dimension must be >= 1");
  if (working_degree_ < 0)
    throw Error(ErrorKind::bad_input, "working degree must be >= 0");
  if (static_cast<int>(coeffs_.size()) != working_degree_ + 1)
    throw Error(ErrorKind::bad_input,
                "coefficient sequence must have working_degree + 1 entries");
  if (coeffs_[0] != 1.0)
    throw Error(ErrorKind::bad_input, "kernel normalization requires a_0 = 1");
  for (double a : coeffs_)
    if (!(a > 0.0))
      throw Error(ErrorKind::bad_input, "kernel coefficients must be positive");
  complete_pick_ = kaluza_holds(coeffs_);
}

KernelSpace KernelSpace::hardy(int working_degree) {
  std::vector<double> a(working_degree + 1, 1.0);
  return KernelSpace(Family::hardy, 0.0, 1, working_degree, std::move(a));
}

KernelSpace KernelSpace::dirichlet(int working_degree) {
  std::vector<double> a(working_degree + 1);
  for (int n = 0; n <= working_degree; ++n) a[n] = 1.0 / (n + 1);
  return KernelSpace(Family::dirichlet, 1.0, 1, working_degree, std::move(a));
}

KernelSpace KernelSpace::d_alpha(double alpha, int dim, int working_degree) {
  std::vector<double> a(working_degree + 1);
  for (int n = 0; n <= working_degree; ++n)
    a[n] = std::pow(static_cast<double>(n + 1), -alpha);
  return KernelSpace(Family::d_alpha, alpha, dim, working_degree,
                     std::move(a));
}

KernelSpace KernelSpace::drury_arveson(int dim, int working_degree) {
  std::vector<double> a(working_degree + 1, 1.0);
  return KernelSpace(Family::drury_arveson, 0.0, dim, working_degree,
                     std::move(a));
}

KernelSpace KernelSpace::custom(std::vector<double> coeffs, int dim) {
  const int wd = static_cast<int>(coeffs.size()) - 1;
  return KernelSpace(Family::custom, 0.0, dim, wd, std::move(coeffs));
}

double KernelSpace::coeff(int n) const {
  if (n < 0 || n > working_degree_)
    throw Error(ErrorKind::degree_exceeded,
                "kernel coefficient index exceeds working degree");
  return coeffs_[n];
}

bool KernelSpace::same_space(const KernelSpace& other) const {
  return family_ == other.family_ && dim_ == other.dim_ &&
         working_degree_ == other.working_degree_ && alpha_ == other.alpha_ &&
         coeffs_ == other.coeffs_;
}

void KernelSpace::require_in_ball(const Point& z) const {
  if (static_cast<int>(z.size()) != dim_)
    throw Error(ErrorKind::dimension_mismatch,
                "point dimension does not match the space");
  double n2 = 0.0;
  for (const cplx& c : z) n2 += std::norm(c);
  if (!(n2 < 1.0 - kBallTol))
    throw Error(ErrorKind::point_outside_ball,
                "point is not strictly inside the unit ball");
}

double monomial_norm_sq(const KernelSpace& space, const MultiIndex& alpha) {
  if (static_cast<int>(alpha.size()) != space.dim())
    throw Error(ErrorKind::dimension_mismatch,
                "multi-index length does not match the space dimension");
  const int n = order(alpha);
  if (n > space.working_degree())
    throw Error(ErrorKind::degree_exceeded,
                "multi-index order exceeds the working degree");
  return 1.0 / (multinomial(alpha) * space.coeff(n));
}

KernelValue kernel_eval(const KernelSpace& space, const Point& w,
                        const Point& z, int truncation) {
  space.require_in_ball(w);
  space.require_in_ball(z);
  if (truncation < 0 || truncation > space.working_degree())
    throw Error(ErrorKind::degree_exceeded,
                "kernel truncation exceeds the working degree");
  cplx t(0.0, 0.0);
  for (int j = 0; j < space.dim(); ++j) t += z[j] * std::conj(w[j]);

  cplx value(0.0, 0.0);
  cplx power(1.0, 0.0);
  for (int n = 0; n <= truncation; ++n) {
    value += space.coeff(n) * power;
    power *= t;
  }

  // Geometric tail estimate: coefficients beyond the truncation are
  // extrapolated with the largest observed one-step growth ratio.
  const double r = std::abs(t);
  double growth = 1.0;
  for (int n = 0; n + 1 <= truncation; ++n)
    growth = std::max(growth, space.coeff(n + 1) / space.coeff(n));
  double tail = 0.0;
  const double q = growth * r;
  if (q < 1.0) {
    tail = space.coeff(truncation) * growth * std::pow(r, truncation + 1) /
           (1.0 - q);
  } else {
    tail = std::numeric_limits<double>::infinity();
  }
  return {value, tail};
}

}  // namespace pickfactor
