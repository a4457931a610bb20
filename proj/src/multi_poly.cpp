#include "pickfactor/multi_poly.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>

namespace pickfactor {

std::vector<MultiIndex> indices_up_to(int dim, int max_order) {
  std::vector<MultiIndex> out;
  MultiIndex current(dim, 0);
  // Depth-first enumeration, then sort graded-lex for a stable order.
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == dim) {
      out.push_back(current);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      current[pos] = v;
      rec(pos + 1, remaining - v);
    }
    current[pos] = 0;
  };
  rec(0, max_order);
  std::sort(out.begin(), out.end(), GradedLexLess{});
  return out;
}

MultiPoly::MultiPoly(KernelSpace space) : space_(std::move(space)) {}

MultiPoly MultiPoly::constant(const KernelSpace& space, cplx value) {
  MultiPoly p(space);
  p.set_coeff(MultiIndex(space.dim(), 0), value);
  return p;
}

MultiPoly MultiPoly::monomial(const KernelSpace& space, const MultiIndex& alpha,
                              cplx coeff) {
  MultiPoly p(space);
  p.set_coeff(alpha, coeff);
  return p;
}

int MultiPoly::degree() const {
  int deg = 0;
  for (const auto& [alpha, c] : terms_) deg = std::max(deg, order(alpha));
  return deg;
}

cplx MultiPoly::coeff(const MultiIndex& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? cplx(0.0, 0.0) : it->second;
}

void MultiPoly::set_coeff(const MultiIndex& alpha, cplx value) {
  if (static_cast<int>(alpha.size()) != space_.dim())
    throw Error(ErrorKind::dimension_mismatch,
                "multi-index length does not match the space dimension");
  for (int a : alpha)
    if (a < 0) throw Error(ErrorKind::bad_input, "negative exponent");
  if (order(alpha) > space_.working_degree())
    throw Error(ErrorKind::degree_exceeded,
                "term degree exceeds the working degree");
  if (value == cplx(0.0, 0.0)) {
    terms_.erase(alpha);
  } else {
    terms_[alpha] = value;
  }
}

MultiPoly MultiPoly::operator+(const MultiPoly& other) const {
  if (!space_.same_space(other.space_))
    throw Error(ErrorKind::space_mismatch, "polynomials live in different spaces");
  MultiPoly out = *this;
  for (const auto& [alpha, c] : other.terms_)
    out.set_coeff(alpha, out.coeff(alpha) + c);
  return out;
}

MultiPoly MultiPoly::operator-(const MultiPoly& other) const {
  return *this + other * cplx(-1.0, 0.0);
}

MultiPoly MultiPoly::operator*(const MultiPoly& other) const {
  if (!space_.same_space(other.space_))
    throw Error(ErrorKind::space_mismatch, "polynomials live in different spaces");
  MultiPoly out(space_);
  for (const auto& [a, ca] : terms_)
    for (const auto& [b, cb] : other.terms_)
      out.set_coeff(add(a, b), out.coeff(add(a, b)) + ca * cb);
  return out;
}

MultiPoly MultiPoly::operator*(cplx scalar) const {
  MultiPoly out(space_);
  if (scalar == cplx(0.0, 0.0)) return out;
  for (const auto& [alpha, c] : terms_) out.terms_[alpha] = c * scalar;
  return out;
}

cplx MultiPoly::eval(const Point& z) const { return eval_poly(*this, z); }

double MultiPoly::max_coeff_diff(const MultiPoly& other) const {
  double m = 0.0;
  for (const auto& [alpha, c] : terms_)
    m = std::max(m, std::abs(c - other.coeff(alpha)));
  for (const auto& [alpha, c] : other.terms_)
    m = std::max(m, std::abs(c - coeff(alpha)));
  return m;
}

cplx inner_product(const KernelSpace& space, const MultiPoly& p,
                   const MultiPoly& q) {
  if (!space.same_space(p.space()) || !space.same_space(q.space()))
    throw Error(ErrorKind::space_mismatch,
                "inner product arguments must share the given space");
  cplx sum(0.0, 0.0);
  // Iterate over the sparser support.
  const MultiPoly& small = p.terms().size() <= q.terms().size() ? p : q;
  const MultiPoly& large = p.terms().size() <= q.terms().size() ? q : p;
  const bool small_is_p = &small == &p;
  for (const auto& [alpha, c] : small.terms()) {
    const cplx other = large.coeff(alpha);
    if (other == cplx(0.0, 0.0)) continue;
    const double w = monomial_norm_sq(space, alpha);
    if (small_is_p)
      sum += c * std::conj(other) * w;
    else
      sum += other * std::conj(c) * w;
  }
  return sum;
}

MultiPoly adjoint_monomial(const KernelSpace& space, const MultiIndex& beta,
                           const MultiPoly& f) {
  if (!space.same_space(f.space()))
    throw Error(ErrorKind::space_mismatch, "polynomial space mismatch");
  if (static_cast<int>(beta.size()) != space.dim())
    throw Error(ErrorKind::dimension_mismatch,
                "multi-index length does not match the space dimension");
  MultiPoly out(space);
  for (const auto& [gamma, c] : f.terms()) {
    MultiIndex alpha;
    if (!subtract(gamma, beta, &alpha)) continue;
    const double ratio =
        monomial_norm_sq(space, gamma) / monomial_norm_sq(space, alpha);
    out.set_coeff(alpha, out.coeff(alpha) + c * ratio);
  }
  return out;
}

double multiplier_compression_norm(const KernelSpace& space,
                                   const MultiPoly& phi, int N) {
  if (!space.same_space(phi.space()))
    throw Error(ErrorKind::space_mismatch, "polynomial space mismatch");
  if (N < 0) throw Error(ErrorKind::bad_input, "subspace degree must be >= 0");
  const int dphi = phi.is_zero() ? 0 : phi.degree();
  if (dphi + N > space.working_degree())
    throw Error(ErrorKind::degree_exceeded,
                "compression degree exceeds the working degree");
  if (phi.is_zero()) return 0.0;

  const std::vector<MultiIndex> cols = indices_up_to(space.dim(), N);
  const std::vector<MultiIndex> rows = indices_up_to(space.dim(), N + dphi);
  std::map<MultiIndex, int, GradedLexLess> row_of;
  for (std::size_t i = 0; i < rows.size(); ++i) row_of[rows[i]] = static_cast<int>(i);

  // Weighted coefficient matrix of h -> phi h between orthonormal monomial
  // bases: entry (gamma, beta) is phi_hat(gamma - beta) sqrt(w_gamma / w_beta)
  // with w_alpha = ||z^alpha||^2.
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(
      static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const double wb = monomial_norm_sq(space, cols[j]);
    for (const auto& [delta, c] : phi.terms()) {
      const MultiIndex gamma = add(cols[j], delta);
      const double wg = monomial_norm_sq(space, gamma);
      M(row_of.at(gamma), static_cast<Eigen::Index>(j)) +=
          c * std::sqrt(wg / wb);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  return svd.singularValues().size() == 0 ? 0.0 : svd.singularValues()(0);
}

cplx eval_poly(const MultiPoly& f, const Point& z) {
  if (static_cast<int>(z.size()) != f.space().dim())
    throw Error(ErrorKind::dimension_mismatch,
                "evaluation point dimension mismatch");
  cplx sum(0.0, 0.0);
  for (const auto& [alpha, c] : f.terms()) {
    cplx mono(1.0, 0.0);
    for (std::size_t j = 0; j < alpha.size(); ++j)
      for (int k = 0; k < alpha[j]; ++k) mono *= z[j];
    sum += c * mono;
  }
  return sum;
}

MultiPoly truncated_kernel_poly(const KernelSpace& space, const Point& w,
                                int truncation) {
  space.require_in_ball(w);
  if (truncation < 0 || truncation > space.working_degree())
    throw Error(ErrorKind::degree_exceeded,
                "kernel truncation exceeds the working degree");
  MultiPoly out(space);
  for (const MultiIndex& alpha : indices_up_to(space.dim(), truncation)) {
    cplx wbar(1.0, 0.0);
    for (std::size_t j = 0; j < alpha.size(); ++j)
      for (int k = 0; k < alpha[j]; ++k) wbar *= std::conj(w[j]);
    const cplx c = space.coeff(order(alpha)) * multinomial(alpha) * wbar;
    if (c != cplx(0.0, 0.0)) out.set_coeff(alpha, c);
  }
  return out;
}

}  // namespace pickfactor
