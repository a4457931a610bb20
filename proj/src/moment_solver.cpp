#include "pickfactor/moment_solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "pickfactor/rng.hpp"

namespace pickfactor {

namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// One real equality constraint p^T Q p + L^T p = rhs over the stacked
// real/imaginary coordinates p = (Re x; Im x).
struct Constraint {
  Mat Q;
  Vec L;
  double rhs;

  double value(const Vec& p) const { return p.dot(Q * p) + L.dot(p) - rhs; }
  Vec gradient(const Vec& p) const { return 2.0 * (Q * p) + L; }
};

// Real symmetric forms of Re(x^H S x) and Im(x^H S x).
Mat real_form(const CMat& S, bool imaginary_part) {
  const Eigen::Index k = S.rows();
  const Mat Sr = S.real();
  const Mat Si = S.imag();
  Mat M(2 * k, 2 * k);
  if (!imaginary_part) {
    M << Sr, -Si, Si, Sr;
  } else {
    M << Si, Sr, -Sr, Si;
  }
  return 0.5 * (M + M.transpose());
}

struct Program {
  int k = 0;                 // complex dimension
  std::vector<Constraint> constraints;
  Vec objective;             // maximize objective . p
  double scale = 1.0;        // typical moment magnitude, for stop tests

  double merit(const Vec& p, double rho) const {
    double pen = 0.0;
    for (const Constraint& c : constraints) pen += std::abs(c.value(p));
    return -objective.dot(p) + rho * pen;
  }

  Vec residuals(const Vec& p) const {
    Vec r(constraints.size());
    for (std::size_t i = 0; i < constraints.size(); ++i)
      r(static_cast<Eigen::Index>(i)) = constraints[i].value(p);
    return r;
  }

  Mat jacobian(const Vec& p) const {
    Mat J(constraints.size(), p.size());
    for (std::size_t i = 0; i < constraints.size(); ++i)
      J.row(static_cast<Eigen::Index>(i)) = constraints[i].gradient(p).transpose();
    return J;
  }
};

// Damped Gauss-Newton on 0.5 ||c(p)||^2.
Vec feasibility_restoration(const Program& prog, Vec p) {
  double lambda = 1e-6;
  double best = prog.residuals(p).squaredNorm();
  for (int iter = 0; iter < 200; ++iter) {
    const Vec c = prog.residuals(p);
    if (c.lpNorm<Eigen::Infinity>() <= 1e-13 * (1.0 + prog.scale)) break;
    const Mat J = prog.jacobian(p);
    const Mat JtJ = J.transpose() * J;
    const Vec g = J.transpose() * c;
    bool stepped = false;
    for (int tries = 0; tries < 12; ++tries) {
      Mat A = JtJ;
      A.diagonal().array() += lambda * (1.0 + JtJ.diagonal().maxCoeff());
      const Vec dp = A.ldlt().solve(-g);
      const double next = prog.residuals(p + dp).squaredNorm();
      if (next < best) {
        p += dp;
        best = next;
        lambda = std::max(lambda * 0.3, 1e-12);
        stepped = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!stepped) break;
  }
  return p;
}

// Newton-KKT sequential quadratic programming with an l1 exact-penalty
// line search.
Vec sqp(const Program& prog, Vec p) {
  const Eigen::Index n = p.size();
  const Eigen::Index m = static_cast<Eigen::Index>(prog.constraints.size());
  double rho = 10.0;
  for (int iter = 0; iter < 150; ++iter) {
    const Vec c = prog.residuals(p);
    const Mat J = prog.jacobian(p);

    // Least-squares multipliers for the Lagrangian Hessian.
    const Vec lambda =
        J.transpose().completeOrthogonalDecomposition().solve(prog.objective);

    Mat W = Mat::Zero(n, n);
    for (Eigen::Index i = 0; i < m; ++i)
      W += lambda(i) * 2.0 * prog.constraints[static_cast<std::size_t>(i)].Q;

    const double kkt =
        (J.transpose() * lambda - prog.objective).lpNorm<Eigen::Infinity>();
    if (c.lpNorm<Eigen::Infinity>() <= 1e-12 * (1.0 + prog.scale) &&
        kkt <= 1e-9 * (1.0 + prog.objective.norm()))
      break;

    rho = std::max(rho, 2.0 * lambda.lpNorm<Eigen::Infinity>() + 1.0);

    bool stepped = false;
    double tau = 1e-10 * (1.0 + W.cwiseAbs().maxCoeff());
    for (int tries = 0; tries < 14 && !stepped; ++tries) {
      Mat KKT = Mat::Zero(n + m, n + m);
      KKT.topLeftCorner(n, n) = W + tau * Mat::Identity(n, n);
      KKT.topRightCorner(n, m) = J.transpose();
      KKT.bottomLeftCorner(m, n) = J;
      KKT.bottomRightCorner(m, m).diagonal().array() = -1e-14;
      Vec rhs(n + m);
      rhs.head(n) = prog.objective;  // -grad f
      rhs.tail(m) = -c;
      const Vec sol = KKT.partialPivLu().solve(rhs);
      const Vec dp = sol.head(n);
      if (!dp.allFinite()) {
        tau = std::max(tau * 100.0, 1e-8);
        continue;
      }
      const double phi0 = prog.merit(p, rho);
      const double slope = -prog.objective.dot(dp) -
                           rho * c.lpNorm<1>();  // descent estimate
      double step = 1.0;
      for (int ls = 0; ls < 40; ++ls) {
        const double phi = prog.merit(p + step * dp, rho);
        if (phi <= phi0 + 1e-4 * step * std::min(slope, 0.0)) {
          p += step * dp;
          stepped = true;
          break;
        }
        step *= 0.5;
      }
      if (!stepped) tau = std::max(tau * 100.0, 1e-8);
    }
    if (!stepped) break;
  }
  return p;
}

// Smoothed exact-penalty descent, used when SQP stalls far from the
// constraint manifold.
Vec penalty_descent(const Program& prog, Vec p) {
  const Eigen::Index n = p.size();
  const double eps = 1e-9;
  for (double rho : {1e3, 1e5, 1e7}) {
    for (int iter = 0; iter < 120; ++iter) {
      Vec grad = -prog.objective;
      Mat H = Mat::Zero(n, n);
      for (const Constraint& cons : prog.constraints) {
        const double v = cons.value(p);
        const Vec g = cons.gradient(p);
        const double s = std::sqrt(v * v + eps * eps);
        grad += rho * (v / s) * g;
        H += rho * ((eps * eps) / (s * s * s)) * (g * g.transpose()) +
             rho * (v / s) * 2.0 * cons.Q;
      }
      Mat A = H;
      A.diagonal().array() += 1e-8 * (1.0 + H.cwiseAbs().maxCoeff());
      Vec dp = A.ldlt().solve(-grad);
      if (!dp.allFinite()) dp = -grad / (1.0 + grad.norm());
      const auto value = [&](const Vec& q) {
        double val = -prog.objective.dot(q);
        for (const Constraint& cons : prog.constraints) {
          const double v = cons.value(q);
          val += rho * std::sqrt(v * v + eps * eps);
        }
        return val;
      };
      const double f0 = value(p);
      double step = 1.0;
      bool ok = false;
      for (int ls = 0; ls < 40; ++ls) {
        if (value(p + step * dp) < f0 - 1e-12 * std::abs(f0)) {
          p += step * dp;
          ok = true;
          break;
        }
        step *= 0.5;
      }
      if (!ok) break;
    }
  }
  return p;
}

// Square Newton iteration on the KKT equations for quadratic convergence
// near a regular solution.
Vec kkt_polish(const Program& prog, Vec p) {
  const Eigen::Index n = p.size();
  const Eigen::Index m = static_cast<Eigen::Index>(prog.constraints.size());
  Vec mu =
      prog.jacobian(p).transpose().completeOrthogonalDecomposition().solve(
          prog.objective);
  const auto F = [&](const Vec& q, const Vec& lam) {
    Vec out(n + m);
    Vec gl = -prog.objective;
    for (Eigen::Index i = 0; i < m; ++i)
      gl += lam(i) * prog.constraints[static_cast<std::size_t>(i)].gradient(q);
    out.head(n) = gl;
    out.tail(m) = prog.residuals(q);
    return out;
  };
  double best = F(p, mu).norm();
  for (int iter = 0; iter < 20; ++iter) {
    const Mat J = prog.jacobian(p);
    Mat W = Mat::Zero(n, n);
    for (Eigen::Index i = 0; i < m; ++i)
      W += mu(i) * 2.0 * prog.constraints[static_cast<std::size_t>(i)].Q;
    Mat A = Mat::Zero(n + m, n + m);
    A.topLeftCorner(n, n) = W;
    A.topLeftCorner(n, n).diagonal().array() += 1e-14;
    A.topRightCorner(n, m) = J.transpose();
    A.bottomLeftCorner(m, n) = J;
    A.bottomRightCorner(m, m).diagonal().array() = -1e-14;
    const Vec rhs = -F(p, mu);
    const Vec d = A.partialPivLu().solve(rhs);
    if (!d.allFinite()) break;
    double step = 1.0;
    bool ok = false;
    for (int ls = 0; ls < 20; ++ls) {
      const Vec pn = p + step * d.head(n);
      const Vec mn = mu + step * d.tail(m);
      const double val = F(pn, mn).norm();
      if (val < best) {
        p = pn;
        mu = mn;
        best = val;
        ok = true;
        break;
      }
      step *= 0.5;
    }
    if (!ok || best <= 1e-15 * (1.0 + prog.scale)) break;
  }
  return p;
}

}  // namespace

SolveOutcome solve_moment_program(const MomentProgram& program) {
  const StarInvariantBasis& basis = *program.basis;
  const KernelSpace& space = basis.space;
  const int k = basis.dimension;

  // Constraint data: S_alpha with (S_alpha)_{l j} = <z^alpha b_j, b_l>.
  Program prog;
  prog.k = k;
  double scale = 0.0;
  const MultiIndex zero_index(space.dim(), 0);
  for (const auto& [alpha, target] : program.targets) {
    CMat S = CMat::Zero(k, k);
    for (int j = 0; j < k; ++j) {
      const MultiPoly shifted =
          MultiPoly::monomial(space, alpha) * basis.vectors[j];
      for (int l = 0; l < k; ++l)
        S(l, j) = inner_product(space, shifted, basis.vectors[l]);
    }
    scale = std::max(scale, std::abs(target));
    const bool structurally_zero = S.cwiseAbs().maxCoeff() <= 1e-14;
    if (structurally_zero) {
      // The span cannot produce this moment; nonzero targets make the
      // program infeasible and are kept so the residual reports it.
      if (std::abs(target) <= 1e-14) continue;
    }
    Constraint re{real_form(S, false), Vec::Zero(2 * k), target.real()};
    prog.constraints.push_back(std::move(re));
    if (order(alpha) > 0) {
      Constraint im{real_form(S, true), Vec::Zero(2 * k), target.imag()};
      prog.constraints.push_back(std::move(im));
    }
  }
  prog.scale = std::max(scale, 1.0);

  // Objective Re g(0) and the linear constraint Im g(0) = 0.
  Vec t_re = Vec::Zero(2 * k);
  Vec t_im = Vec::Zero(2 * k);
  const Point origin(space.dim(), cplx(0.0, 0.0));
  for (int j = 0; j < k; ++j) {
    const cplx b0 = eval_poly(basis.vectors[j], origin);
    t_re(j) = b0.real();
    t_re(k + j) = -b0.imag();
    t_im(j) = b0.imag();
    t_im(k + j) = b0.real();
  }
  prog.objective = t_re;
  if (t_im.norm() > 0.0)
    prog.constraints.push_back(Constraint{Mat::Zero(2 * k, 2 * k), t_im, 0.0});

  const double m0 = [&] {
    auto it = program.targets.find(zero_index);
    return it == program.targets.end() ? 1.0 : std::abs(it->second.real());
  }();

  // Initial points: caller-provided warm starts, then seeded random draws
  // scaled so the norm constraint starts satisfied.
  std::vector<Vec> starts;
  const auto pack = [&](const std::vector<cplx>& x) {
    Vec p = Vec::Zero(2 * k);
    for (int j = 0; j < k && j < static_cast<int>(x.size()); ++j) {
      p(j) = x[j].real();
      p(k + j) = x[j].imag();
    }
    return p;
  };
  for (const auto& ws : program.warm_starts) starts.push_back(pack(ws));
  Rng rng(program.seed);
  for (int r = 0; r < program.restarts; ++r) {
    std::vector<cplx> x(k);
    double n2 = 0.0;
    for (int j = 0; j < k; ++j) {
      x[j] = rng.cnormal();
      n2 += std::norm(x[j]);
    }
    const double s = n2 > 0.0 ? std::sqrt(m0 / n2) : 0.0;
    for (cplx& v : x) v *= s;
    starts.push_back(pack(x));
  }

  const auto unpack = [&](const Vec& p) {
    std::vector<cplx> x(k);
    for (int j = 0; j < k; ++j) x[j] = cplx(p(j), p(k + j));
    return x;
  };
  const auto poly_of = [&](const std::vector<cplx>& x) {
    MultiPoly g(space);
    for (int j = 0; j < k; ++j) g = g + basis.vectors[j] * x[j];
    return g;
  };
  const auto residual_of = [&](const MultiPoly& g) {
    double res = 0.0;
    for (const auto& [alpha, target] : program.targets) {
      cplx m(0.0, 0.0);
      for (const auto& [beta, c] : g.terms()) {
        const cplx top = g.coeff(add(alpha, beta));
        if (top == cplx(0.0, 0.0)) continue;
        m += c * std::conj(top) * monomial_norm_sq(space, add(alpha, beta));
      }
      res = std::max(res, std::abs(m - target));
    }
    return res;
  };

  SolveOutcome best{{},
                    MultiPoly(space),
                    -std::numeric_limits<double>::infinity(),
                    std::numeric_limits<double>::infinity(),
                    false,
                    static_cast<int>(starts.size())};

  for (const Vec& start : starts) {
    Vec p = feasibility_restoration(prog, start);
    p = sqp(prog, p);
    if (prog.residuals(p).lpNorm<Eigen::Infinity>() >
        1e-10 * (1.0 + prog.scale)) {
      p = penalty_descent(prog, p);
      p = feasibility_restoration(prog, p);
    }
    p = kkt_polish(prog, p);

    std::vector<cplx> x = unpack(p);
    MultiPoly g = poly_of(x);
    // Phase normalization: rotate so g(0) is real and >= 0; moments are
    // invariant under unimodular scaling.
    const cplx g0 = eval_poly(g, origin);
    if (std::abs(g0) > 0.0) {
      const cplx phase = std::conj(g0) / std::abs(g0);
      for (cplx& v : x) v *= phase;
      g = poly_of(x);
    }
    const double obj = eval_poly(g, origin).real();
    const double res = residual_of(g);
    const bool feas = res <= program.tol_moments;

    bool better = false;
    if (feas && !best.feasible)
      better = true;
    else if (feas && best.feasible)
      better = obj > best.objective + 1e-14;
    else if (!feas && !best.feasible)
      better = res < best.moment_residual;
    if (better) {
      best.coeffs = x;
      best.g = g;
      best.objective = obj;
      best.moment_residual = res;
      best.feasible = feas;
    }
  }
  return best;
}

}  // namespace pickfactor
