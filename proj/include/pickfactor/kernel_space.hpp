#pragma once

#include <complex>
#include <string>
#include <vector>

#include "pickfactor/errors.hpp"
#include "pickfactor/multi_index.hpp"

namespace pickfactor {

using cplx = std::complex<double>;

// A point of C^d (d = space dimension).
using Point = std::vector<cplx>;

enum class Family { hardy, dirichlet, d_alpha, drury_arveson, custom };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

// Diagonal unitarily invariant kernel space on the d-ball with kernel
// k_w(z) = sum_n a_n <z,w>^n, a_0 = 1, a_n > 0. Built-in families satisfy
// the Kaluza condition (a_n / a_{n+1} non-increasing), which makes the
// kernel a normalized complete Pick kernel; custom coefficient sequences
// are accepted with complete_pick = false when the condition fails, and
// factorization operations refuse to run on such spaces.
class KernelSpace {
 public:
  static constexpr int kDefaultWorkingDegree = 24;

  static KernelSpace hardy(int working_degree = kDefaultWorkingDegree);
  static KernelSpace dirichlet(int working_degree = kDefaultWorkingDegree);
  static KernelSpace d_alpha(double alpha, int dim,
                             int working_degree = kDefaultWorkingDegree);
  static KernelSpace drury_arveson(int dim,
                                   int working_degree = kDefaultWorkingDegree);
  static KernelSpace custom(std::vector<double> coeffs, int dim);

  Family family() const { return family_; }
  double alpha() const { return alpha_; }
  int dim() const { return dim_; }
  int working_degree() const { return working_degree_; }
  const std::vector<double>& coeffs() const { return coeffs_; }

  // a_n for n <= working_degree.
  double coeff(int n) const;

  // True when the Kaluza condition held at construction.
  bool complete_pick() const { return complete_pick_; }

  bool same_space(const KernelSpace& other) const;

  // Strict ball membership |z| < 1 - 1e-14, with dimension check.
  void require_in_ball(const Point& z) const;

 private:
  KernelSpace(Family family, double alpha, int dim, int working_degree,
              std::vector<double> coeffs);

  Family family_;
  double alpha_;
  int dim_;
  int working_degree_;
  std::vector<double> coeffs_;
  bool complete_pick_;
};

// ||z^alpha||^2 = alpha! / (|alpha|! * a_{|alpha|}).
double monomial_norm_sq(const KernelSpace& space, const MultiIndex& alpha);

struct KernelValue {
  cplx value;        // sum_{n <= truncation} a_n <z,w>^n
  double tail_bound; // estimate for |sum_{n > truncation} a_n <z,w>^n|
};

// Truncated kernel evaluation; w is the kernel parameter, z the argument,
// <z,w> = sum_j z_j conj(w_j).
KernelValue kernel_eval(const KernelSpace& space, const Point& w,
                        const Point& z, int truncation);

}  // namespace pickfactor
