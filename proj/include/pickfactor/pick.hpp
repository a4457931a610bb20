#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "pickfactor/kernel_ratio.hpp"
#include "pickfactor/multi_poly.hpp"

namespace pickfactor {

// Interpolation data: distinct points in the open ball with complex
// targets, plus the kernel truncation degree used for matrix entries.
struct PickProblem {
  KernelSpace space;
  std::vector<Point> points;
  std::vector<cplx> targets;
  int truncation;
};

// K_ij = k_{lambda_i}(lambda_j) (Gramian of the kernels),
// P_ij = (1 - conj(w_i) w_j) K_ij (Pick matrix). Both Hermitian; ranks
// use the threshold 1e-10 * max |eigenvalue|.
struct PickMatrices {
  Eigen::MatrixXcd K;
  Eigen::MatrixXcd P;
  Eigen::VectorXd eig_K;
  Eigen::VectorXd eig_P;
  int rank_K;
  int rank_P;
  double kernel_slack;  // max kernel truncation tail over all entries
};

PickMatrices build_pick(const PickProblem& problem);

enum class PickClass { infeasible, solvable, extremal };

std::string pick_class_name(PickClass c);

// infeasible iff the smallest eigenvalue of P is below -psd_tol with
// psd_tol = 1e-10 * trace(P); extremal iff PSD and rank P < rank K.
PickClass classify(const PickProblem& problem);
PickClass classify(const PickMatrices& matrices);

// Solves an extremal problem: null vector a of P with the largest ||K a||
// gives f = sum_j conj(a_j) k_{lambda_j}, g = sum_j conj(a_j) conj(w_j)
// k_{lambda_j}, and phi = f / g interpolates the data with ||f|| = ||g||.
struct ExtremalSolution {
  KernelRatio phi;
  std::vector<cplx> num_weights;
  std::vector<cplx> den_weights;
  double interp_residual;  // max_i |phi(lambda_i) - w_i|
  double norm_match;       // | ||f|| - ||g|| | via Gram arithmetic
};

ExtremalSolution extremal_solve(const PickProblem& problem);

// One stage of the subinner approximation scheme: data are the values of
// phi + t psi on the point set, with t found by bisection so that the
// Pick matrix just touches singularity (restricted multiplier norm 1).
struct ApproximantStage {
  double t;
  ExtremalSolution solution;
  std::vector<Point> points;
  std::vector<cplx> targets;
  double min_eigenvalue;  // smallest eigenvalue of P at the solved t
};

struct ApproxOptions {
  int truncation = KernelSpace::kDefaultWorkingDegree;
  double bisect_tol = 1e-12;
  int scan_steps = 64;
};

// For each point set X_n (all containing 0) finds t_n in [0,2] with the
// Pick matrix of (X_n, (phi + t_n psi_n)|X_n) on the PSD boundary, then
// solves the resulting extremal problem. Directions psi_n default to
// normalized Gram-Schmidt increments of the truncated kernels of the last
// point of X_n against the span of the earlier ones.
std::vector<ApproximantStage> subinner_approximants(
    const KernelSpace& space, const MultiPoly& phi,
    const std::vector<std::vector<Point>>& schedule,
    const std::vector<MultiPoly>& directions = {},
    const ApproxOptions& options = {});

}  // namespace pickfactor
