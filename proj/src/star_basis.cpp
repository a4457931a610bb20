#include "pickfactor/star_basis.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>

namespace pickfactor {

namespace {

constexpr double kRankTol = 1e-10;

StarInvariantBasis build_basis(const KernelSpace& space,
                               const std::vector<MultiPoly>& sources,
                               const MultiPoly& tag) {
  int max_deg = 0;
  for (const MultiPoly& f : sources)
    if (!f.is_zero()) max_deg = std::max(max_deg, f.degree());

  // Columns are the adjoint-monomial images, coordinates scaled by
  // sqrt(||z^alpha||^2) so Euclidean inner products match the space ones.
  const std::vector<MultiIndex> rows = indices_up_to(space.dim(), max_deg);
  std::map<MultiIndex, int, GradedLexLess> row_of;
  std::vector<double> row_weight(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    row_of[rows[i]] = static_cast<int>(i);
    row_weight[i] = std::sqrt(monomial_norm_sq(space, rows[i]));
  }

  std::vector<Eigen::VectorXcd> columns;
  for (const MultiPoly& f : sources) {
    if (f.is_zero()) continue;
    for (const MultiIndex& beta : indices_up_to(space.dim(), f.degree())) {
      const MultiPoly image = adjoint_monomial(space, beta, f);
      if (image.is_zero()) continue;
      Eigen::VectorXcd col =
          Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(rows.size()));
      for (const auto& [alpha, c] : image.terms())
        col(row_of.at(alpha)) = c * row_weight[row_of.at(alpha)];
      columns.push_back(std::move(col));
    }
  }
  if (columns.empty())
    throw Error(ErrorKind::zero_polynomial,
                "star-invariant basis of the zero polynomial");

  Eigen::MatrixXcd A(static_cast<Eigen::Index>(rows.size()),
                     static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) A.col(j) = columns[j];

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > kRankTol * smax) ++rank;

  StarInvariantBasis basis{space, tag, {}, rank};
  for (int j = 0; j < rank; ++j) {
    MultiPoly b(space);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const cplx c = svd.matrixU()(static_cast<Eigen::Index>(i), j);
      if (std::abs(c) > 0.0) b.set_coeff(rows[i], c / row_weight[i]);
    }
    basis.vectors.push_back(std::move(b));
  }
  return basis;
}

}  // namespace

StarInvariantBasis star_invariant_basis(const KernelSpace& space,
                                        const MultiPoly& f) {
  if (!space.same_space(f.space()))
    throw Error(ErrorKind::space_mismatch, "polynomial space mismatch");
  if (f.is_zero())
    throw Error(ErrorKind::zero_polynomial,
                "star-invariant basis of the zero polynomial");
  return build_basis(space, {f}, f);
}

StarInvariantBasis joint_star_invariant_basis(
    const KernelSpace& space, const std::vector<MultiPoly>& fs) {
  if (fs.empty())
    throw Error(ErrorKind::empty_input, "no polynomials given");
  bool any = false;
  for (const MultiPoly& f : fs) {
    if (!space.same_space(f.space()))
      throw Error(ErrorKind::space_mismatch, "polynomial space mismatch");
    if (!f.is_zero()) any = true;
  }
  if (!any)
    throw Error(ErrorKind::zero_polynomial, "all polynomials are zero");
  return build_basis(space, fs, fs.front());
}

}  // namespace pickfactor
