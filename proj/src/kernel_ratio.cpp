#include "pickfactor/kernel_ratio.hpp"

#include <cmath>
#include <limits>

#include "pickfactor/rng.hpp"

namespace pickfactor {

namespace {

constexpr double kDivisionGuard = 1e-12;

cplx eval_part(const KernelSpace& space, const KernelRatio::Part& part,
               const Point& z) {
  if (std::holds_alternative<MultiPoly>(part))
    return eval_poly(std::get<MultiPoly>(part), z);
  const KernelCombo& combo = std::get<KernelCombo>(part);
  cplx sum(0.0, 0.0);
  for (std::size_t j = 0; j < combo.points.size(); ++j)
    sum += combo.weights[j] *
           kernel_eval(space, combo.points[j], z, combo.truncation).value;
  return sum;
}

bool part_is_zero(const KernelRatio::Part& part) {
  if (std::holds_alternative<MultiPoly>(part))
    return std::get<MultiPoly>(part).is_zero();
  const KernelCombo& combo = std::get<KernelCombo>(part);
  for (const cplx& w : combo.weights)
    if (w != cplx(0.0, 0.0)) return false;
  return true;
}

}  // namespace

KernelRatio::KernelRatio(KernelSpace space, Part numerator, Part denominator)
    : space_(std::move(space)),
      numerator_(std::move(numerator)),
      denominator_(std::move(denominator)) {
  if (part_is_zero(denominator_))
    throw Error(ErrorKind::bad_input, "ratio denominator is identically zero");
  if (std::holds_alternative<KernelCombo>(denominator_)) {
    const KernelCombo& combo = std::get<KernelCombo>(denominator_);
    if (combo.points.size() != combo.weights.size())
      throw Error(ErrorKind::bad_input,
                  "kernel combination points/weights size mismatch");
  }
}

cplx KernelRatio::eval_numerator(const Point& z) const {
  return eval_part(space_, numerator_, z);
}

cplx KernelRatio::eval_denominator(const Point& z) const {
  return eval_part(space_, denominator_, z);
}

cplx KernelRatio::eval(const Point& z) const {
  const cplx den = eval_denominator(z);
  if (std::abs(den) <= kDivisionGuard)
    throw Error(ErrorKind::division_guard,
                "ratio denominator vanishes at the evaluation point");
  return eval_numerator(z) / den;
}

double KernelRatio::denominator_min_on_grid(int samples,
                                            std::uint64_t seed) const {
  Rng rng(seed);
  const int d = space_.dim();
  double min_abs = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    // Uniform direction, radius biased toward the boundary but < 0.95.
    Point z(d);
    double n2 = 0.0;
    for (int j = 0; j < d; ++j) {
      z[j] = rng.cnormal();
      n2 += std::norm(z[j]);
    }
    const double r = 0.95 * std::pow(rng.uniform(), 1.0 / (2.0 * d));
    const double scale = n2 > 0.0 ? r / std::sqrt(n2) : 0.0;
    for (int j = 0; j < d; ++j) z[j] *= scale;
    min_abs = std::min(min_abs, std::abs(eval_denominator(z)));
  }
  return min_abs;
}

}  // namespace pickfactor
