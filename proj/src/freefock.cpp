#include "pickfactor/freefock.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>

#include "pickfactor/errors.hpp"

namespace pickfactor {

namespace {

void check_letters(const Word& w, int dim) {
  for (int letter : w)
    if (letter < 1 || letter > dim)
      throw Error(ErrorKind::bad_input, "word letter outside 1..dim");
}

int resolve_budget(int dim, int budget) {
  if (budget >= 0) return budget;
  const int def = default_fock_budget(dim);
  if (def < 0)
    throw Error(ErrorKind::bad_input,
                "dimension needs an explicit word budget");
  return def;
}

// Graded-lex rank of a word: all shorter words first, then base-d digits.
std::size_t word_rank(const Word& w, int dim) {
  std::size_t base = 0;
  std::size_t block = 1;
  for (std::size_t k = 0; k < w.size(); ++k) {
    base += block;
    block *= static_cast<std::size_t>(dim);
  }
  std::size_t offset = 0;
  for (int letter : w)
    offset = offset * static_cast<std::size_t>(dim) +
             static_cast<std::size_t>(letter - 1);
  return base + offset;
}

std::size_t words_up_to(int dim, int len) {
  std::size_t total = 0;
  std::size_t block = 1;
  for (int k = 0; k <= len; ++k) {
    total += block;
    block *= static_cast<std::size_t>(dim);
  }
  return total;
}

}  // namespace

MultiIndex word_multi_index(const Word& w, int dim) {
  check_letters(w, dim);
  MultiIndex alpha(dim, 0);
  for (int letter : w) ++alpha[letter - 1];
  return alpha;
}

int default_fock_budget(int dim) {
  switch (dim) {
    case 1: return 30;
    case 2: return 14;
    case 3: return 9;
    default: return -1;
  }
}

FreePoly::FreePoly(int dim) : dim_(dim) {
  if (dim < 1) throw Error(ErrorKind::bad_input, "dimension must be >= 1");
}

FreePoly FreePoly::constant(int dim, cplx value) {
  FreePoly p(dim);
  p.set_coeff(Word{}, value);
  return p;
}

FreePoly FreePoly::letter(int dim, int letter) {
  return word_monomial(dim, Word{letter});
}

FreePoly FreePoly::word_monomial(int dim, const Word& w, cplx coeff) {
  FreePoly p(dim);
  p.set_coeff(w, coeff);
  return p;
}

int FreePoly::degree() const {
  return terms_.empty() ? 0 : word_length(terms_.rbegin()->first);
}

cplx FreePoly::coeff(const Word& w) const {
  const auto it = terms_.find(w);
  return it == terms_.end() ? cplx(0.0, 0.0) : it->second;
}

void FreePoly::set_coeff(const Word& w, cplx value) {
  check_letters(w, dim_);
  if (value == cplx(0.0, 0.0))
    terms_.erase(w);
  else
    terms_[w] = value;
}

FreePoly FreePoly::operator+(const FreePoly& other) const {
  if (dim_ != other.dim_)
    throw Error(ErrorKind::dimension_mismatch, "mixed word alphabets");
  FreePoly out = *this;
  for (const auto& [w, c] : other.terms_) out.set_coeff(w, out.coeff(w) + c);
  return out;
}

FreePoly FreePoly::operator-(const FreePoly& other) const {
  return *this + other * cplx(-1.0, 0.0);
}

FreePoly FreePoly::operator*(cplx scalar) const {
  FreePoly out(dim_);
  if (scalar == cplx(0.0, 0.0)) return out;
  for (const auto& [w, c] : terms_) out.terms_[w] = c * scalar;
  return out;
}

double FreePoly::norm_sq() const {
  double total = 0.0;
  for (const auto& [w, c] : terms_) total += std::norm(c);
  return total;
}

FreePoly FreePoly::homogeneous_part(int k) const {
  FreePoly out(dim_);
  for (const auto& [w, c] : terms_)
    if (word_length(w) == k) out.terms_[w] = c;
  return out;
}

double FreePoly::degree_weight(int k) const {
  double total = 0.0;
  for (const auto& [w, c] : terms_)
    if (word_length(w) == k) total += std::norm(c);
  return std::sqrt(total);
}

cplx fock_inner(const FreePoly& F, const FreePoly& G) {
  if (F.dim() != G.dim())
    throw Error(ErrorKind::dimension_mismatch, "mixed word alphabets");
  const bool f_small = F.terms().size() <= G.terms().size();
  const FreePoly& small = f_small ? F : G;
  const FreePoly& large = f_small ? G : F;
  cplx total(0.0, 0.0);
  for (const auto& [w, c] : small.terms()) {
    const cplx other = large.coeff(w);
    if (other == cplx(0.0, 0.0)) continue;
    total += f_small ? c * std::conj(other) : other * std::conj(c);
  }
  return total;
}

FreePoly free_mul(const FreePoly& F, const FreePoly& G) {
  if (F.dim() != G.dim())
    throw Error(ErrorKind::dimension_mismatch, "mixed word alphabets");
  FreePoly out(F.dim());
  for (const auto& [u, cu] : F.terms())
    for (const auto& [v, cv] : G.terms()) {
      Word w = u;
      w.insert(w.end(), v.begin(), v.end());
      out.set_coeff(w, out.coeff(w) + cu * cv);
    }
  return out;
}

FreePoly flip(const FreePoly& F) {
  FreePoly out(F.dim());
  for (const auto& [w, c] : F.terms()) {
    Word rev(w.rbegin(), w.rend());
    out.set_coeff(rev, c);
  }
  return out;
}

int MatrixTuple::size() const {
  return matrices.empty() ? 0 : static_cast<int>(matrices.front().rows());
}

double MatrixTuple::row_norm() const {
  if (matrices.empty()) return 0.0;
  const Eigen::Index n = matrices.front().rows();
  Eigen::MatrixXcd row(n, n * static_cast<Eigen::Index>(matrices.size()));
  for (std::size_t j = 0; j < matrices.size(); ++j)
    row.middleCols(static_cast<Eigen::Index>(j) * n, n) = matrices[j];
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(row);
  return svd.singularValues()(0);
}

Eigen::MatrixXcd eval_free(const FreePoly& F, const MatrixTuple& X) {
  if (X.dim() != F.dim())
    throw Error(ErrorKind::dimension_mismatch,
                "matrix tuple size must match the alphabet");
  const Eigen::Index n = X.size();
  for (const Eigen::MatrixXcd& M : X.matrices)
    if (M.rows() != n || M.cols() != n)
      throw Error(ErrorKind::dimension_mismatch,
                  "matrices must be square and of equal size");
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& [w, c] : F.terms()) {
    Eigen::MatrixXcd prod = Eigen::MatrixXcd::Identity(n, n);
    for (int letter : w) prod = prod * X.matrices[static_cast<std::size_t>(letter - 1)];
    total += c * prod;
  }
  return total;
}

FreePoly free_sarason(const FreePoly& F, SarasonSide side, int max_len,
                      int budget) {
  if (max_len < 0) throw Error(ErrorKind::bad_input, "max_len must be >= 0");
  const int limit = resolve_budget(F.dim(), budget);
  if (max_len + F.degree() > limit)
    throw Error(ErrorKind::budget_exceeded,
                "max_len plus degree exceeds the word budget");
  FreePoly V(F.dim());
  V.set_coeff(Word{}, cplx(F.norm_sq(), 0.0));
  // 2 <F, F x^w> pairs big = small . w (left); big = w . small (right).
  for (const auto& [big, cb] : F.terms()) {
    for (const auto& [small, cs] : F.terms()) {
      const int ell = word_length(big) - word_length(small);
      if (ell <= 0 || ell > max_len) continue;
      bool match = true;
      Word w;
      if (side == SarasonSide::left) {
        for (std::size_t i = 0; i < small.size(); ++i)
          if (big[i] != small[i]) {
            match = false;
            break;
          }
        if (match) w.assign(big.begin() + static_cast<long>(small.size()),
                            big.end());
      } else {
        for (std::size_t i = 0; i < small.size(); ++i)
          if (big[static_cast<std::size_t>(ell) + i] != small[i]) {
            match = false;
            break;
          }
        if (match) w.assign(big.begin(), big.begin() + ell);
      }
      if (!match) continue;
      V.set_coeff(w, V.coeff(w) + 2.0 * cb * std::conj(cs));
    }
  }
  return V;
}

FreePoly embed_symmetric(const MultiPoly& f) {
  const KernelSpace& space = f.space();
  for (int n = 1; n <= f.degree(); ++n)
    if (space.coeff(n) != 1.0)
      throw Error(ErrorKind::space_mismatch,
                  "symmetric embedding needs unit kernel coefficients");
  FreePoly F(space.dim());
  for (const auto& [alpha, c] : f.terms()) {
    Word sorted;
    for (std::size_t j = 0; j < alpha.size(); ++j)
      sorted.insert(sorted.end(), static_cast<std::size_t>(alpha[j]),
                    static_cast<int>(j) + 1);
    const cplx value = c / multinomial(alpha);
    Word w = sorted;
    do {
      F.set_coeff(w, value);
    } while (std::next_permutation(w.begin(), w.end()));
  }
  return F;
}

double outer_defect(const FreePoly& F, int N, int budget) {
  if (F.is_zero())
    throw Error(ErrorKind::zero_polynomial, "outer defect of zero");
  if (N < 0) throw Error(ErrorKind::bad_input, "N must be >= 0");
  const int limit = resolve_budget(F.dim(), budget);
  if (N + F.degree() > limit)
    throw Error(ErrorKind::budget_exceeded,
                "N plus degree exceeds the word budget");

  const int dim = F.dim();
  const std::size_t rows = words_up_to(dim, N + F.degree());
  const std::size_t cols = words_up_to(dim, N);

  // Column for shift word w holds F's coefficients at rows w.u.
  std::vector<Word> shifts;
  shifts.reserve(cols);
  {
    std::vector<Word> frontier{Word{}};
    shifts.push_back(Word{});
    for (int len = 1; len <= N; ++len) {
      std::vector<Word> next;
      next.reserve(frontier.size() * static_cast<std::size_t>(dim));
      for (const Word& w : frontier)
        for (int letter = 1; letter <= dim; ++letter) {
          Word e = w;
          e.push_back(letter);
          shifts.push_back(e);
          next.push_back(std::move(e));
        }
      frontier = std::move(next);
    }
  }

  using Triplet = Eigen::Triplet<cplx>;
  std::vector<Triplet> entries;
  entries.reserve(shifts.size() * F.terms().size());
  for (std::size_t j = 0; j < shifts.size(); ++j) {
    for (const auto& [u, c] : F.terms()) {
      Word full = shifts[j];
      full.insert(full.end(), u.begin(), u.end());
      entries.emplace_back(static_cast<int>(word_rank(full, dim)),
                           static_cast<int>(j), c);
    }
  }

  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(rows));
  b(0) = cplx(1.0, 0.0);

  if (rows * cols <= 4'000'000ull) {
    Eigen::MatrixXcd A =
        Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows),
                               static_cast<Eigen::Index>(cols));
    for (const Triplet& t : entries) A(t.row(), t.col()) += t.value();
    const Eigen::VectorXcd c = A.colPivHouseholderQr().solve(b);
    return (b - A * c).norm();
  }

  Eigen::SparseMatrix<cplx> A(static_cast<Eigen::Index>(rows),
                              static_cast<Eigen::Index>(cols));
  A.setFromTriplets(entries.begin(), entries.end());
  Eigen::LeastSquaresConjugateGradient<Eigen::SparseMatrix<cplx>> solver;
  solver.setTolerance(1e-12);
  solver.setMaxIterations(5000);
  solver.compute(A);
  const Eigen::VectorXcd c = solver.solve(b);
  return (b - A * c).norm();
}

}  // namespace pickfactor
