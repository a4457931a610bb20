#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "pickfactor/multi_poly.hpp"

namespace pickfactor {

// Finite combination sum_j weights[j] * k_{points[j]}, evaluated with the
// truncated kernel.
struct KernelCombo {
  std::vector<Point> points;
  std::vector<cplx> weights;
  int truncation = KernelSpace::kDefaultWorkingDegree;
};

// Ratio of two expressions, each a polynomial or a kernel combination.
// Division guard: evaluation requires |denominator(z)| > 1e-12.
class KernelRatio {
 public:
  using Part = std::variant<MultiPoly, KernelCombo>;

  KernelRatio(KernelSpace space, Part numerator, Part denominator);

  const KernelSpace& space() const { return space_; }
  const Part& numerator() const { return numerator_; }
  const Part& denominator() const { return denominator_; }

  cplx eval_numerator(const Point& z) const;
  cplx eval_denominator(const Point& z) const;
  cplx eval(const Point& z) const;

  // Smallest |denominator| over a deterministic sample of the open ball;
  // factorization outputs are checked against a positive margin.
  double denominator_min_on_grid(int samples = 256,
                                 std::uint64_t seed = 12345) const;

 private:
  KernelSpace space_;
  Part numerator_;
  Part denominator_;
};

}  // namespace pickfactor
