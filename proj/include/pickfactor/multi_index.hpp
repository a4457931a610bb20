#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace pickfactor {

// Exponent vector of a monomial in d commuting variables.
using MultiIndex = std::vector<int>;

// |alpha|, the total degree.
inline int order(const MultiIndex& alpha) {
  return std::accumulate(alpha.begin(), alpha.end(), 0);
}

// Multinomial coefficient |alpha|! / alpha!, computed as a product of
// binomials so every intermediate value stays integral.
inline double multinomial(const MultiIndex& alpha) {
  double result = 1.0;
  long long n = 0;
  for (int a : alpha) {
    for (int j = 1; j <= a; ++j) {
      ++n;
      result = result * static_cast<double>(n) / static_cast<double>(j);
    }
  }
  return result;
}

// Graded lexicographic order: lower total degree first, then lex.
struct GradedLexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const {
    const int oa = order(a);
    const int ob = order(b);
    if (oa != ob) return oa < ob;
    return a < b;
  }
};

inline MultiIndex add(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

// a - b when b <= a componentwise; returns false otherwise.
inline bool subtract(const MultiIndex& a, const MultiIndex& b,
                     MultiIndex* out) {
  out->resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (b[i] > a[i]) return false;
    (*out)[i] = a[i] - b[i];
  }
  return true;
}

// All multi-indices of length dim with total degree <= max_order, in graded
// lexicographic order.
std::vector<MultiIndex> indices_up_to(int dim, int max_order);

}  // namespace pickfactor
