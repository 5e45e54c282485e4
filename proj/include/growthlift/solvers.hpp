#pragma once

#include <string>

#include "growthlift/problems.hpp"
#include "growthlift/types.hpp"

namespace growthlift {

enum class SolverId { prox, polyak, bundle_mc, bundle_agg };

const char* to_string(SolverId id);
SolverId parse_solver(const std::string& name);
bool is_bundle(SolverId id);

/// x_{k+1} = prox_{rho,F}(x_k) with constant stepsize. Requires a prox oracle.
Trace proximal_point(const ProblemInstance& problem, const SolverConfig& config,
                     const Eigen::Ref<const Vec>& x0);

/// x_{k+1} = x_k - rho_k g_k with the Polyak stepsize rho_k = (F(x_k) - F*) / ||g_k||^2.
Trace subgradient_polyak(const ProblemInstance& problem, const SolverConfig& config,
                         const Eigen::Ref<const Vec>& x0);

/// Bundle method keeping the multicut model max_{j in J_k} l_j.
Trace bundle_multicut(const ProblemInstance& problem, const SolverConfig& config,
                      const Eigen::Ref<const Vec>& x0);

/// Bundle method keeping one aggregate plane plus the newest cut.
Trace bundle_aggregate(const ProblemInstance& problem, const SolverConfig& config,
                       const Eigen::Ref<const Vec>& x0);

Trace run_solver(SolverId id, const ProblemInstance& problem, const SolverConfig& config,
                 const Eigen::Ref<const Vec>& x0);

/// Bundle model state entering iteration k: the incumbent, the cuts in the
/// model (multicut) or the aggregate plane plus newest cut (aggregation), and
/// the dual weights of the subproblem solved at iteration k.
struct BundleState {
  Vec incumbent;
  std::vector<int> model_cut_ids;        // multicut variant
  std::vector<double> lambda;            // dual weights, aligned with model_cut_ids
  std::optional<AffinePlane> aggregate;  // aggregation variant (-inf sentinel when absent)
  std::optional<Cut> newest;             // aggregation variant

  double model_value(const Trace& trace, const Eigen::Ref<const Vec>& x) const;
};

/// Reconstructs the state entering iteration k (0-based) from a bundle trace.
BundleState bundle_state_at(const Trace& trace, int k);

}  // namespace growthlift
