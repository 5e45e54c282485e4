#pragma once

#include <string>
#include <utility>
#include <vector>

#include "growthlift/bounds.hpp"
#include "growthlift/problems.hpp"
#include "growthlift/solvers.hpp"
#include "growthlift/types.hpp"

namespace growthlift {

struct ExperimentSpec {
  ProblemInstance problem;
  SolverId solver = SolverId::prox;
  SolverConfig config;
  Vec x0;
  std::vector<double> eps_list;      // strictly decreasing, all > 0
  std::vector<std::string> checks;   // empty = solver-appropriate defaults
};

struct CheckReport {
  std::string check;
  bool pass = false;
  double worst_residual = 0.0;
  int at_iteration = -1;
  std::string note;
};

std::vector<std::string> default_checks(SolverId id);

/// Runs the solver (target_eps = smallest eps) and evaluates the requested checks.
std::pair<Trace, std::vector<CheckReport>> run(const ExperimentSpec& spec);

struct EquivalenceResult {
  CheckReport report;
  double measured_D = 0.0;
  int first_eps_index = -1;
  int first_divergence = -1;  // first out-of-tolerance index; -1: none
  int first_bitwise_divergence = -1;  // informational (last-bit prox differences)
  bool bitwise = false;
};

/// Runs the solver on F and on G = lift_general(F, eps, measured D, p); PASS
/// iff the iterate sequences agree (rel 1e-9, abs floor 1e-12) up to and
/// including the first index where F's trace reaches gap <= eps. The solver
/// cannot distinguish F from the floored G before that index.
EquivalenceResult check_equivalence_detailed(const ProblemInstance& problem, SolverId solver,
                                             const SolverConfig& config,
                                             const Eigen::Ref<const Vec>& x0, double epsilon,
                                             double p);
CheckReport check_equivalence(const ProblemInstance& problem, SolverId solver,
                              const SolverConfig& config, const Eigen::Ref<const Vec>& x0,
                              double epsilon, double p);

/// Same protocol with G = lift_higher; additionally verifies the two-case
/// floor inequality (threshold radius (eps/alpha)^{1/q}) at every traced point.
EquivalenceResult check_higher_equivalence_detailed(const ProblemInstance& problem,
                                                    SolverId solver, const SolverConfig& config,
                                                    const Eigen::Ref<const Vec>& x0,
                                                    double epsilon, double p);
CheckReport check_higher_equivalence(const ProblemInstance& problem, SolverId solver,
                                     const SolverConfig& config,
                                     const Eigen::Ref<const Vec>& x0, double epsilon, double p);

/// PASS iff the first eps-minimizer index <= ceil(bound) for every eps in eps_list.
CheckReport check_bound(const Trace& trace, const RateBound& bound, BoundParams params,
                        const std::vector<double>& eps_list);

/// prox/polyak: max_k ||x_k - x*|| <= ||x0 - x*|| + 1e-9;
/// bundle: max_k ||z_k - x*||^2 <= 2 (1 + (1-beta)/beta)(||x0 - x*||^2 + L^2/rho^2) + 1e-6.
CheckReport check_distance(const Trace& trace, SolverId solver, const ProblemInstance& problem,
                           const SolverConfig& config, const Eigen::Ref<const Vec>& x0);

}  // namespace growthlift
