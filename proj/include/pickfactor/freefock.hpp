#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <vector>

#include "pickfactor/multi_poly.hpp"

namespace pickfactor {

// Word over the alphabet {1..d}; the empty word is the unit.
using Word = std::vector<int>;

inline int word_length(const Word& w) { return static_cast<int>(w.size()); }

// Graded lexicographic comparison (shorter first, then lex).
struct WordGradedLexLess {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

// Letter-count multi-index of a word.
MultiIndex word_multi_index(const Word& w, int dim);

// Default truncation budget (max word length) per dimension; the CLI can
// override it via PICKFACTOR_BUDGET.
int default_fock_budget(int dim);

// Sparse free polynomial F = sum_w F_hat(w) x^w in F^2_d. The norm is the
// coefficient l2 norm.
class FreePoly {
 public:
  using TermMap = std::map<Word, cplx, WordGradedLexLess>;

  explicit FreePoly(int dim);
  static FreePoly constant(int dim, cplx value);
  static FreePoly letter(int dim, int letter);
  static FreePoly word_monomial(int dim, const Word& w,
                                cplx coeff = cplx(1.0, 0.0));

  int dim() const { return dim_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;

  cplx coeff(const Word& w) const;
  void set_coeff(const Word& w, cplx value);

  FreePoly operator+(const FreePoly& other) const;
  FreePoly operator-(const FreePoly& other) const;
  FreePoly operator*(cplx scalar) const;

  double norm_sq() const;

  // Coefficients of total length k, as a FreePoly.
  FreePoly homogeneous_part(int k) const;
  // M_k = sqrt(sum_{|w|=k} |F_hat(w)|^2).
  double degree_weight(int k) const;

 private:
  int dim_;
  TermMap terms_;
};

// <F, G> = sum_w F_hat(w) conj(G_hat(w)).
cplx fock_inner(const FreePoly& F, const FreePoly& G);

// Concatenation convolution (FG)_hat(w) = sum_{w=uv} F_hat(u) G_hat(v).
FreePoly free_mul(const FreePoly& F, const FreePoly& G);

// Word-reversal involution; isometric, anti-multiplicative.
FreePoly flip(const FreePoly& F);

// Tuple of d square matrices; row_norm is the largest singular value of
// the row block [X_1 ... X_d].
struct MatrixTuple {
  std::vector<Eigen::MatrixXcd> matrices;

  int dim() const { return static_cast<int>(matrices.size()); }
  int size() const;
  double row_norm() const;
};

// sum_w F_hat(w) X^w; per-degree parts obey
// ||sum_{|w|=k} F_hat(w) X^w|| <= M_k(F) row_norm^k.
Eigen::MatrixXcd eval_free(const FreePoly& F, const MatrixTuple& X);

enum class SarasonSide { left, right };

// Free Sarason function: constant term ||F||^2, coefficient at w != empty
// equal to 2 <F, F x^w> (left) or 2 <F, x^w F> (right); terms with
// |w| > max_len are dropped (they vanish for |w| > deg F anyway).
FreePoly free_sarason(const FreePoly& F, SarasonSide side, int max_len,
                      int budget = -1);

// Symmetric embedding of a Drury-Arveson polynomial:
// F_hat(w) = f_hat(alpha(w)) alpha(w)!/|alpha(w)|!. Isometric, flip-fixed.
FreePoly embed_symmetric(const MultiPoly& f);

// Least-squares distance from the constant 1 to span{x^w F : |w| <= N}.
// Non-increasing in N; decays to 0 exactly for left outer F. The right
// version is outer_defect(flip(F), N).
double outer_defect(const FreePoly& F, int N, int budget = -1);

}  // namespace pickfactor
