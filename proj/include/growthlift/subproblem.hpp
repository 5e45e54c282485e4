#pragma once

#include <optional>
#include <vector>

#include "growthlift/types.hpp"

namespace growthlift {

struct SubproblemSolution {
  Vec z;
  std::vector<double> lambda;  // simplex weights aligned with the input cuts
  double model_value = 0.0;    // max_j l_j(z)
  double complementarity = 0.0;     // max over lambda_j > 0 of model_value - l_j(z)
  double pd_gap = 0.0;              // primal objective at z minus dual objective at lambda
  double recovery_residual = 0.0;   // ||rho (x_center - z) - sum lambda_j g_j||
  int dual_iterations = 0;
};

/// Minimizes max_j l_j(x) + (rho/2) ||x - x_center||^2 exactly via the
/// simplex-constrained concave dual (fully corrective active set).
SubproblemSolution solve_multicut_subproblem(const std::vector<Cut>& cuts,
                                             const Eigen::Ref<const Vec>& x_center, double rho);

struct TwoCutSolution {
  Vec z;
  double theta = 0.0;  // dual weight on the aggregate plane
};

/// Closed-form solve of max{l_newest, l_aggregate} + (rho/2) ||x - x_center||^2.
/// A missing aggregate is the -inf sentinel of iteration 0 (theta = 0).
TwoCutSolution solve_two_cut_subproblem(const Cut& newest,
                                        const std::optional<AffinePlane>& aggregate,
                                        const Eigen::Ref<const Vec>& x_center, double rho);

/// Projected-gradient (FISTA) reference for the multicut dual; verification only.
std::vector<double> solve_simplex_qp_reference(const std::vector<Cut>& cuts,
                                               const Eigen::Ref<const Vec>& x_center, double rho,
                                               int iterations);

/// Euclidean projection onto the probability simplex.
Vec project_simplex(const Eigen::Ref<const Vec>& v);

}  // namespace growthlift
