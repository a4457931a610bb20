#include "pickfactor/pick.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pickfactor/errors.hpp"

namespace pickfactor {

namespace {

constexpr double kRankTol = 1e-10;

void validate_points(const PickProblem& problem) {
  if (problem.points.empty())
    throw Error(ErrorKind::empty_input, "no interpolation points");
  if (problem.points.size() != problem.targets.size())
    throw Error(ErrorKind::bad_input,
                "points and targets must have equal length");
  if (problem.truncation < 0 ||
      problem.truncation > problem.space.working_degree())
    throw Error(ErrorKind::bad_input, "truncation outside working degree");
  for (const Point& p : problem.points) problem.space.require_in_ball(p);
  for (std::size_t i = 0; i < problem.points.size(); ++i)
    for (std::size_t j = i + 1; j < problem.points.size(); ++j) {
      double d2 = 0.0;
      for (std::size_t c = 0; c < problem.points[i].size(); ++c)
        d2 += std::norm(problem.points[i][c] - problem.points[j][c]);
      if (d2 <= 1e-24)
        throw Error(ErrorKind::coincident_points,
                    "interpolation points must be distinct");
    }
}

int rank_above(const Eigen::VectorXd& eigs) {
  const double max_abs = eigs.cwiseAbs().maxCoeff();
  const double thr = kRankTol * max_abs;
  int rank = 0;
  for (Eigen::Index i = 0; i < eigs.size(); ++i)
    if (std::abs(eigs(i)) > thr) ++rank;
  return rank;
}

PickClass classify_impl(const PickMatrices& m) {
  const double psd_tol = 1e-10 * m.P.trace().real();
  if (m.eig_P.minCoeff() < -psd_tol) return PickClass::infeasible;
  return m.rank_P < m.rank_K ? PickClass::extremal : PickClass::solvable;
}

// Null vector of P maximizing a^H K a, scaled so a^H K a = 1, with the
// first sizeable entry rotated to the positive real axis. When `strict`
// the problem must classify as extremal; otherwise the eigenvector of the
// smallest |eigenvalue| is accepted (boundary solves from the bisection).
ExtremalSolution solve_core(const PickProblem& problem,
                            const PickMatrices& m, bool strict) {
  if (strict) {
    const PickClass cls = classify_impl(m);
    if (cls != PickClass::extremal)
      throw Error(ErrorKind::not_extremal,
                  "problem classifies as " + pick_class_name(cls));
  }
  const Eigen::Index n = m.P.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.P);
  const double thr = kRankTol * es.eigenvalues().cwiseAbs().maxCoeff();
  std::vector<Eigen::Index> null_cols;
  Eigen::Index arg_min = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(es.eigenvalues()(i)) <= thr) null_cols.push_back(i);
    if (std::abs(es.eigenvalues()(i)) < std::abs(es.eigenvalues()(arg_min)))
      arg_min = i;
  }
  if (null_cols.empty()) {
    if (strict)
      throw Error(ErrorKind::not_extremal, "Pick matrix has trivial kernel");
    null_cols.push_back(arg_min);
  }

  Eigen::MatrixXcd V(n, static_cast<Eigen::Index>(null_cols.size()));
  for (std::size_t c = 0; c < null_cols.size(); ++c)
    V.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(null_cols[c]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> gram(V.adjoint() * m.K * V);
  Eigen::VectorXcd a = V * gram.eigenvectors().col(V.cols() - 1);

  const double f_norm_sq = std::real(a.dot(m.K * a));
  if (f_norm_sq <= 1e-14 * m.K.trace().real())
    throw Error(ErrorKind::degenerate_kernel,
                "kernel combination has vanishing norm");
  a /= std::sqrt(f_norm_sq);
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(a(i)) > 1e-12) {
      a *= std::conj(a(i)) / std::abs(a(i));
      break;
    }

  std::vector<cplx> num_w(static_cast<std::size_t>(n));
  std::vector<cplx> den_w(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    num_w[static_cast<std::size_t>(i)] = std::conj(a(i));
    den_w[static_cast<std::size_t>(i)] =
        std::conj(a(i)) * std::conj(problem.targets[static_cast<std::size_t>(i)]);
  }

  KernelRatio phi(problem.space,
                  KernelRatio::Part(KernelCombo{problem.points, num_w,
                                                problem.truncation}),
                  KernelRatio::Part(KernelCombo{problem.points, den_w,
                                                problem.truncation}));

  double interp = 0.0;
  for (std::size_t i = 0; i < problem.points.size(); ++i) {
    try {
      interp = std::max(
          interp, std::abs(phi.eval(problem.points[i]) - problem.targets[i]));
    } catch (const Error&) {
      interp = std::numeric_limits<double>::infinity();
    }
  }

  Eigen::VectorXcd aw(n);
  for (Eigen::Index i = 0; i < n; ++i)
    aw(i) = a(i) * problem.targets[static_cast<std::size_t>(i)];
  const double g_norm_sq = std::real(aw.dot(m.K * aw));
  const double norm_match =
      std::abs(std::sqrt(std::real(a.dot(m.K * a))) - std::sqrt(g_norm_sq));

  return ExtremalSolution{std::move(phi), std::move(num_w), std::move(den_w),
                          interp, norm_match};
}

}  // namespace

PickMatrices build_pick(const PickProblem& problem) {
  validate_points(problem);
  const Eigen::Index n = static_cast<Eigen::Index>(problem.points.size());
  Eigen::MatrixXcd K(n, n);
  double slack = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const KernelValue kv = kernel_eval(
          problem.space, problem.points[static_cast<std::size_t>(i)],
          problem.points[static_cast<std::size_t>(j)], problem.truncation);
      K(i, j) = kv.value;
      slack = std::max(slack, kv.tail_bound);
    }
  K = 0.5 * (K + K.adjoint()).eval();
  Eigen::MatrixXcd P(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      P(i, j) = (1.0 - std::conj(problem.targets[static_cast<std::size_t>(i)]) *
                           problem.targets[static_cast<std::size_t>(j)]) *
                K(i, j);
  P = 0.5 * (P + P.adjoint()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es_k(K);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es_p(P);
  PickMatrices m{std::move(K),
                 std::move(P),
                 es_k.eigenvalues(),
                 es_p.eigenvalues(),
                 0,
                 0,
                 slack};
  m.rank_K = rank_above(m.eig_K);
  m.rank_P = rank_above(m.eig_P);
  return m;
}

std::string pick_class_name(PickClass c) {
  switch (c) {
    case PickClass::infeasible: return "infeasible";
    case PickClass::solvable: return "solvable";
    case PickClass::extremal: return "extremal";
  }
  return "unknown";
}

PickClass classify(const PickMatrices& matrices) {
  return classify_impl(matrices);
}

PickClass classify(const PickProblem& problem) {
  return classify_impl(build_pick(problem));
}

ExtremalSolution extremal_solve(const PickProblem& problem) {
  const PickMatrices m = build_pick(problem);
  return solve_core(problem, m, true);
}

std::vector<ApproximantStage> subinner_approximants(
    const KernelSpace& space, const MultiPoly& phi,
    const std::vector<std::vector<Point>>& schedule,
    const std::vector<MultiPoly>& directions, const ApproxOptions& options) {
  if (schedule.empty())
    throw Error(ErrorKind::empty_input, "empty point schedule");
  if (!directions.empty() && directions.size() != schedule.size())
    throw Error(ErrorKind::bad_input,
                "directions must match the schedule length");

  std::vector<ApproximantStage> stages;
  stages.reserve(schedule.size());
  for (std::size_t stage = 0; stage < schedule.size(); ++stage) {
    const std::vector<Point>& pts = schedule[stage];
    if (pts.empty())
      throw Error(ErrorKind::empty_input, "empty point set in schedule");

    // Direction: Gram-Schmidt increment of the last point's truncated
    // kernel against the span of the earlier kernels, unit norm.
    MultiPoly psi(space);
    if (!directions.empty()) {
      psi = directions[stage];
    } else {
      std::vector<MultiPoly> ortho;
      for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
        MultiPoly v = truncated_kernel_poly(space, pts[j], options.truncation);
        for (const MultiPoly& u : ortho)
          v = v - u * inner_product(space, v, u);
        const double nv = std::sqrt(norm_sq(space, v));
        if (nv > 1e-10) ortho.push_back(v * cplx(1.0 / nv, 0.0));
      }
      psi = truncated_kernel_poly(space, pts.back(), options.truncation);
      for (const MultiPoly& u : ortho)
        psi = psi - u * inner_product(space, psi, u);
      const double np = std::sqrt(norm_sq(space, psi));
      if (np <= 1e-10)
        throw Error(ErrorKind::degenerate_kernel,
                    "kernel increment vanishes; points too close");
      psi = psi * cplx(1.0 / np, 0.0);
    }

    std::vector<cplx> phi_vals(pts.size());
    std::vector<cplx> psi_vals(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      phi_vals[i] = eval_poly(phi, pts[i]);
      psi_vals[i] = eval_poly(psi, pts[i]);
    }

    PickProblem base{space, pts, phi_vals, options.truncation};
    validate_points(base);
    const Eigen::Index n = static_cast<Eigen::Index>(pts.size());
    Eigen::MatrixXcd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        K(i, j) = kernel_eval(space, pts[static_cast<std::size_t>(i)],
                              pts[static_cast<std::size_t>(j)],
                              options.truncation)
                      .value;
    K = 0.5 * (K + K.adjoint()).eval();

    const auto min_eig_at = [&](double t) {
      Eigen::MatrixXcd P(n, n);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
          const cplx wi = phi_vals[static_cast<std::size_t>(i)] +
                          t * psi_vals[static_cast<std::size_t>(i)];
          const cplx wj = phi_vals[static_cast<std::size_t>(j)] +
                          t * psi_vals[static_cast<std::size_t>(j)];
          P(i, j) = (1.0 - std::conj(wi) * wj) * K(i, j);
        }
      P = 0.5 * (P + P.adjoint()).eval();
      return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(P)
          .eigenvalues()
          .minCoeff();
    };

    const double e0 = min_eig_at(0.0);
    const double psd_tol_0 = 1e-10 * std::abs(K.trace().real());
    if (e0 < -psd_tol_0)
      throw Error(ErrorKind::bad_input,
                  "target is not contractive on the point set");
    double t_star = 0.0;
    if (e0 > 0.0) {
      double lo = 0.0;
      double hi = -1.0;
      for (int s = 1; s <= options.scan_steps; ++s) {
        const double t = 2.0 * s / options.scan_steps;
        if (min_eig_at(t) <= 0.0) {
          lo = 2.0 * (s - 1) / options.scan_steps;
          hi = t;
          break;
        }
      }
      if (hi < 0.0)
        throw Error(ErrorKind::no_convergence,
                    "Pick matrix stays positive definite up to t = 2 "
                    "(smallest eigenvalue " +
                        std::to_string(min_eig_at(2.0)) + ")");
      while (hi - lo > options.bisect_tol) {
        const double mid = 0.5 * (lo + hi);
        (min_eig_at(mid) > 0.0 ? lo : hi) = mid;
      }
      t_star = std::abs(min_eig_at(lo)) < std::abs(min_eig_at(hi)) ? lo : hi;
    }

    std::vector<cplx> targets(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
      targets[i] = phi_vals[i] + t_star * psi_vals[i];
    PickProblem solved{space, pts, targets, options.truncation};
    const PickMatrices m = build_pick(solved);
    ApproximantStage out{t_star, solve_core(solved, m, false), pts, targets,
                         min_eig_at(t_star)};
    stages.push_back(std::move(out));
  }
  return stages;
}

}  // namespace pickfactor
