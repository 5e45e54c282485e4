#include "growthlift/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "growthlift/subproblem.hpp"

namespace growthlift {

namespace {

void validate_common(const ProblemInstance& problem, const SolverConfig& cfg,
                     const Eigen::Ref<const Vec>& x0) {
  if (x0.size() != problem.dim) throw ParameterError("x0: dimension mismatch with problem");
  if (!x0.allFinite()) throw ParameterError("x0: entries must be finite");
  if (cfg.max_iter < 1) throw ParameterError("max_iter: must be >= 1");
  if (!(cfg.target_eps > 0.0)) throw ParameterError("target_eps: must be positive");
}

void validate_bundle(const SolverConfig& cfg) {
  if (!(cfg.rho > 0.0)) throw ParameterError("rho: must be positive");
  if (!(cfg.beta > 0.0 && cfg.beta < 1.0)) throw ParameterError("beta: must lie in (0,1)");
  if (!(cfg.eps_stop >= 0.0)) throw ParameterError("eps_stop: must be >= 0");
}

TraceRecord make_record(int k, StepKind step, const Vec& x, const ProblemInstance& problem,
                        double stepsize) {
  TraceRecord r;
  r.k = k;
  r.step = step;
  r.x = x;
  r.value = problem.value(x);
  r.gap = r.value - problem.f_star;
  r.dist = (x - problem.x_star).norm();
  r.stepsize = stepsize;
  return r;
}

}  // namespace

const char* to_string(SolverId id) {
  switch (id) {
    case SolverId::prox: return "prox";
    case SolverId::polyak: return "polyak";
    case SolverId::bundle_mc: return "bundle-mc";
    case SolverId::bundle_agg: return "bundle-agg";
  }
  return "?";
}

SolverId parse_solver(const std::string& name) {
  if (name == "prox") return SolverId::prox;
  if (name == "polyak") return SolverId::polyak;
  if (name == "bundle-mc") return SolverId::bundle_mc;
  if (name == "bundle-agg") return SolverId::bundle_agg;
  throw ParameterError("method: unknown solver '" + name + "'");
}

bool is_bundle(SolverId id) { return id == SolverId::bundle_mc || id == SolverId::bundle_agg; }

Trace proximal_point(const ProblemInstance& problem, const SolverConfig& cfg,
                     const Eigen::Ref<const Vec>& x0) {
  validate_common(problem, cfg, x0);
  if (!(cfg.rho > 0.0)) throw ParameterError("rho: must be positive");
  if (!problem.has_prox())
    throw CapabilityError("proximal_point: problem provides no prox oracle");

  Trace tr;
  Vec x = x0;
  tr.records.push_back(make_record(0, StepKind::init, x, problem, 0.0));
  if (tr.records.back().gap <= cfg.target_eps) {
    tr.termination = Termination::eps_reached;
    return tr;
  }
  for (int k = 1; k <= cfg.max_iter; ++k) {
    x = problem.prox(x, cfg.rho);
    tr.records.push_back(make_record(k, StepKind::prox, x, problem, cfg.rho));
    if (tr.records.back().gap <= cfg.target_eps) {
      tr.termination = Termination::eps_reached;
      return tr;
    }
  }
  tr.termination = Termination::max_iter;
  return tr;
}

Trace subgradient_polyak(const ProblemInstance& problem, const SolverConfig& cfg,
                         const Eigen::Ref<const Vec>& x0) {
  validate_common(problem, cfg, x0);
  Trace tr;
  Vec x = x0;
  tr.records.push_back(make_record(0, StepKind::init, x, problem, 0.0));
  if (tr.records.back().gap <= cfg.target_eps) {
    tr.termination = Termination::eps_reached;
    return tr;
  }
  for (int k = 1; k <= cfg.max_iter; ++k) {
    const double f = tr.records.back().value;
    const Vec g = problem.subgradient(x);
    const double gsq = g.squaredNorm();
    tr.sup_subgrad_norm = std::max(tr.sup_subgrad_norm, std::sqrt(gsq));
    // A vanishing subgradient at positive gap contradicts convexity with known F*.
    if (std::sqrt(gsq) < 1e-14)
      throw OracleError("subgradient_polyak: zero subgradient at positive objective gap");
    const double step = (f - problem.f_star) / gsq;
    x = (x - step * g).eval();
    tr.records.push_back(make_record(k, StepKind::subgrad, x, problem, step));
    if (tr.records.back().gap <= cfg.target_eps) {
      tr.termination = Termination::eps_reached;
      return tr;
    }
  }
  tr.termination = Termination::max_iter;
  return tr;
}

Trace bundle_multicut(const ProblemInstance& problem, const SolverConfig& cfg,
                      const Eigen::Ref<const Vec>& x0) {
  validate_common(problem, cfg, x0);
  validate_bundle(cfg);

  Trace tr;
  Vec x = x0;
  double fx = problem.value(x);
  {
    TraceRecord r0 = make_record(0, StepKind::init, x, problem, 0.0);
    r0.z = x;
    r0.z_value = fx;
    tr.records.push_back(std::move(r0));
  }
  Vec g0 = problem.subgradient(x);
  tr.sup_subgrad_norm = g0.norm();
  tr.cuts.push_back({x, fx, std::move(g0)});
  std::vector<int> J = {0};
  if (tr.records.back().gap <= cfg.target_eps) {
    tr.termination = Termination::eps_reached;
    return tr;
  }

  for (int k = 0; k < cfg.max_iter; ++k) {
    std::vector<Cut> model;
    model.reserve(J.size());
    for (int j : J) model.push_back(tr.cuts[j]);
    const SubproblemSolution sol = solve_multicut_subproblem(model, x, cfg.rho);
    tr.dual_complementarity.update(sol.complementarity, k + 1);
    tr.dual_pd_gap.update(sol.pd_gap, k + 1);
    tr.dual_recovery.update(sol.recovery_residual, k + 1);

    const Vec& znew = sol.z;
    const double model_gap = fx - sol.model_value;
    if (model_gap <= cfg.eps_stop) {
      tr.termination = Termination::eps_stop_triggered;
      return tr;
    }
    const double fz = problem.value(znew);
    const bool descent = (fz <= fx - cfg.beta * model_gap);
    Vec gnew = problem.subgradient(znew);
    tr.sup_subgrad_norm = std::max(tr.sup_subgrad_norm, gnew.norm());
    if (!descent)
      tr.measured_m =
          std::max(tr.measured_m, (gnew - cfg.rho * (znew - x)).squaredNorm() / cfg.rho);

    // J_{k+1}: numerically active cuts plus any carrying weight, plus the new cut.
    std::vector<int> Jnext;
    const double tol_active = 1e-11 * (1.0 + std::abs(sol.model_value));
    for (size_t a = 0; a < J.size(); ++a)
      if (sol.lambda[a] > 1e-12 || model[a].eval(znew) >= sol.model_value - tol_active)
        Jnext.push_back(J[a]);
    const int new_id = static_cast<int>(tr.cuts.size());
    tr.cuts.push_back({znew, fz, std::move(gnew)});
    Jnext.push_back(new_id);

    const StepKind kind = descent ? StepKind::descent : StepKind::null_step;
    if (descent) {
      x = znew;
      fx = fz;
    }
    TraceRecord r = make_record(k + 1, kind, x, problem, cfg.rho);
    r.z = znew;
    r.z_value = fz;
    r.model_gap = model_gap;
    r.model_cut_ids = J;
    r.lambda = sol.lambda;
    tr.records.push_back(std::move(r));
    J = std::move(Jnext);
    if (tr.records.back().gap <= cfg.target_eps) {
      tr.termination = Termination::eps_reached;
      return tr;
    }
  }
  tr.termination = Termination::max_iter;
  return tr;
}

Trace bundle_aggregate(const ProblemInstance& problem, const SolverConfig& cfg,
                       const Eigen::Ref<const Vec>& x0) {
  validate_common(problem, cfg, x0);
  validate_bundle(cfg);

  Trace tr;
  Vec x = x0;
  double fx = problem.value(x);
  {
    TraceRecord r0 = make_record(0, StepKind::init, x, problem, 0.0);
    r0.z = x;
    r0.z_value = fx;
    tr.records.push_back(std::move(r0));
  }
  Vec g = problem.subgradient(x);
  tr.sup_subgrad_norm = g.norm();
  tr.cuts.push_back({x, fx, g});
  Vec z_newest = x;
  double f_newest = fx;
  Vec g_newest = g;
  std::optional<AffinePlane> agg;  // -inf sentinel until the first update
  if (tr.records.back().gap <= cfg.target_eps) {
    tr.termination = Termination::eps_reached;
    return tr;
  }

  for (int k = 0; k < cfg.max_iter; ++k) {
    const Cut newest{z_newest, f_newest, g_newest};
    const TwoCutSolution tc = solve_two_cut_subproblem(newest, agg, x, cfg.rho);
    double model_at_z = newest.eval(tc.z);
    if (agg) model_at_z = std::max(model_at_z, agg->eval(tc.z));
    const double model_gap = fx - model_at_z;
    if (model_gap <= cfg.eps_stop) {
      tr.termination = Termination::eps_stop_triggered;
      return tr;
    }
    const double fz = problem.value(tc.z);
    const bool descent = (fz <= fx - cfg.beta * model_gap);
    Vec gnew = problem.subgradient(tc.z);
    tr.sup_subgrad_norm = std::max(tr.sup_subgrad_norm, gnew.norm());
    if (!descent)
      tr.measured_m =
          std::max(tr.measured_m, (gnew - cfg.rho * (tc.z - x)).squaredNorm() / cfg.rho);

    // The dual-optimal theta makes grad(aggregate) = rho (x_k - z_{k+1}).
    const AffinePlane newest_plane{newest.g, newest.fz - newest.g.dot(newest.z)};
    if (!agg) {
      agg = newest_plane;
    } else {
      agg = AffinePlane{(tc.theta * agg->g + (1.0 - tc.theta) * newest_plane.g).eval(),
                        tc.theta * agg->b + (1.0 - tc.theta) * newest_plane.b};
    }
    tr.agg_identity.update((agg->g - cfg.rho * (x - tc.z)).norm(), k + 1);

    tr.cuts.push_back({tc.z, fz, gnew});
    const StepKind kind = descent ? StepKind::descent : StepKind::null_step;
    if (descent) {
      x = tc.z;
      fx = fz;
    }
    TraceRecord r = make_record(k + 1, kind, x, problem, cfg.rho);
    r.z = tc.z;
    r.z_value = fz;
    r.model_gap = model_gap;
    r.theta = tc.theta;
    tr.records.push_back(std::move(r));

    z_newest = tc.z;
    f_newest = fz;
    g_newest = std::move(gnew);
    if (tr.records.back().gap <= cfg.target_eps) {
      tr.termination = Termination::eps_reached;
      return tr;
    }
  }
  tr.termination = Termination::max_iter;
  return tr;
}

Trace run_solver(SolverId id, const ProblemInstance& problem, const SolverConfig& cfg,
                 const Eigen::Ref<const Vec>& x0) {
  switch (id) {
    case SolverId::prox: return proximal_point(problem, cfg, x0);
    case SolverId::polyak: return subgradient_polyak(problem, cfg, x0);
    case SolverId::bundle_mc: return bundle_multicut(problem, cfg, x0);
    case SolverId::bundle_agg: return bundle_aggregate(problem, cfg, x0);
  }
  throw ParameterError("solver: unknown id");
}

double BundleState::model_value(const Trace& trace, const Eigen::Ref<const Vec>& x) const {
  if (newest) {
    double m = newest->eval(x);
    if (aggregate) m = std::max(m, aggregate->eval(x));
    return m;
  }
  double m = -std::numeric_limits<double>::infinity();
  for (int id : model_cut_ids) m = std::max(m, trace.cuts[id].eval(x));
  return m;
}

BundleState bundle_state_at(const Trace& trace, int k) {
  if (trace.cuts.empty()) throw ParameterError("trace: not a bundle trace");
  if (k < 0 || k + 1 >= static_cast<int>(trace.records.size()))
    throw ParameterError("k: iteration index outside the trace");
  const TraceRecord& next = trace.records[k + 1];
  BundleState st;
  st.incumbent = trace.records[k].x;
  if (std::isnan(next.theta)) {
    st.model_cut_ids = next.model_cut_ids;
    st.lambda = next.lambda;
  } else {
    // Replay the aggregation recursion up to iteration k.
    std::optional<AffinePlane> agg;
    for (int j = 0; j < k; ++j) {
      const Cut& cj = trace.cuts[j];
      const AffinePlane plane{cj.g, cj.fz - cj.g.dot(cj.z)};
      const double theta = trace.records[j + 1].theta;
      if (!agg)
        agg = plane;
      else
        agg = AffinePlane{(theta * agg->g + (1.0 - theta) * plane.g).eval(),
                          theta * agg->b + (1.0 - theta) * plane.b};
    }
    st.aggregate = agg;
    st.newest = trace.cuts[k];
    st.lambda = {next.theta, 1.0 - next.theta};
  }
  return st;
}

}  // namespace growthlift
