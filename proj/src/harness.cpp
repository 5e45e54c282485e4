#include "growthlift/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "growthlift/io.hpp"

namespace growthlift {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double uniform01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

std::vector<Vec> sample_points(const ProblemInstance& problem, double radius, int count,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Vec> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) {
    Vec y(problem.dim);
    for (int d = 0; d < problem.dim; ++d)
      y(d) = problem.x_star(d) + radius * (2.0 * uniform01(rng) - 1.0);
    pts.push_back(std::move(y));
  }
  return pts;
}

double sample_radius(const Trace& trace) {
  return std::max(2.0, 2.0 * trace.records.front().dist);
}

CheckReport prox_optimality_check(const Trace& trace, const ProblemInstance& problem,
                                  const SolverConfig& cfg) {
  CheckReport rep;
  rep.check = "prox_optimality";
  const auto pts = sample_points(problem, sample_radius(trace), 64, 12345);
  WorstResidual w;
  for (size_t k = 1; k < trace.records.size(); ++k) {
    const Vec& xk = trace.records[k].x;
    const Vec v = (trace.records[k - 1].x - xk) / cfg.rho;
    const double fxk = trace.records[k].value;
    for (const Vec& y : pts)
      w.update(fxk + v.dot(y - xk) - problem.value(y), trace.records[k].k);
  }
  rep.worst_residual = w.value;
  rep.at_iteration = w.at;
  rep.pass = w.value <= 1e-8;
  return rep;
}

CheckReport prox_descent_check(const Trace& trace, const SolverConfig& cfg) {
  CheckReport rep;
  rep.check = "prox_descent";
  WorstResidual w;
  for (size_t k = 1; k < trace.records.size(); ++k) {
    const double step2 = (trace.records[k].x - trace.records[k - 1].x).squaredNorm();
    w.update(trace.records[k].value - trace.records[k - 1].value + step2 / (2.0 * cfg.rho),
             trace.records[k].k);
  }
  rep.worst_residual = w.value;
  rep.at_iteration = w.at;
  rep.pass = w.value <= 1e-9;
  return rep;
}

CheckReport polyak_recurrence_check(const Trace& trace, const ProblemInstance& problem) {
  CheckReport rep;
  rep.check = "polyak_recurrence";
  const double L2 = problem.lipschitz * problem.lipschitz;
  WorstResidual w;
  for (size_t k = 0; k + 1 < trace.records.size(); ++k) {
    const auto& a = trace.records[k];
    const auto& b = trace.records[k + 1];
    w.update(b.dist * b.dist - (a.dist * a.dist - a.gap * a.gap / L2), b.k);
  }
  rep.worst_residual = w.value;
  rep.at_iteration = w.at;
  rep.pass = w.value <= 1e-9;
  return rep;
}

CheckReport model_minorant_check(const Trace& trace, const ProblemInstance& problem) {
  CheckReport rep;
  rep.check = "model_minorant";
  const auto pts = sample_points(problem, sample_radius(trace), 1000, 777);
  WorstResidual w;
  int idx = 0;
  for (const Vec& y : pts) {
    double model = -kInf;
    for (const Cut& c : trace.cuts) model = std::max(model, c.eval(y));
    w.update(model - problem.value(y), idx++);
  }
  rep.worst_residual = w.value;
  rep.at_iteration = w.at;
  rep.note = "location is the sample index";
  rep.pass = w.value <= 1e-10;
  return rep;
}

CheckReport incumbent_monotone_check(const Trace& trace) {
  CheckReport rep;
  rep.check = "incumbent_monotone";
  WorstResidual w;
  for (size_t k = 1; k < trace.records.size(); ++k)
    w.update(trace.records[k].value - trace.records[k - 1].value, trace.records[k].k);
  rep.worst_residual = w.value;
  rep.at_iteration = w.at;
  rep.pass = w.value <= 0.0;
  return rep;
}

CheckReport aggregation_identity_check(const Trace& trace) {
  CheckReport rep;
  rep.check = "aggregation_identity";
  rep.worst_residual = trace.agg_identity.value;
  rep.at_iteration = trace.agg_identity.at;
  rep.pass = trace.agg_identity.value <= 1e-10;
  return rep;
}

CheckReport subproblem_duals_check(const Trace& trace) {
  CheckReport rep;
  rep.check = "subproblem_duals";
  rep.pass = trace.dual_complementarity.value <= 1e-8 && trace.dual_pd_gap.value <= 1e-8 &&
             trace.dual_recovery.value <= 1e-10;
  rep.worst_residual = std::max(
      {trace.dual_complementarity.value, trace.dual_pd_gap.value, trace.dual_recovery.value});
  if (rep.worst_residual == trace.dual_recovery.value) {
    rep.at_iteration = trace.dual_recovery.at;
    rep.note = "recovery identity";
  } else if (rep.worst_residual == trace.dual_pd_gap.value) {
    rep.at_iteration = trace.dual_pd_gap.at;
    rep.note = "primal-dual gap";
  } else {
    rep.at_iteration = trace.dual_complementarity.at;
    rep.note = "complementarity";
  }
  return rep;
}

CheckReport descent_rule_check(const Trace& trace, const SolverConfig& cfg) {
  CheckReport rep;
  rep.check = "descent_rule";
  int mismatches = 0;
  int first = -1;
  for (size_t k = 1; k < trace.records.size(); ++k) {
    const auto& r = trace.records[k];
    if (std::isnan(r.model_gap)) continue;
    const double prev_value = trace.records[k - 1].value;
    const bool expected = r.z_value <= prev_value - cfg.beta * r.model_gap;
    const bool actual = r.step == StepKind::descent;
    if (expected != actual) {
      ++mismatches;
      if (first < 0) first = r.k;
    }
  }
  rep.worst_residual = mismatches;
  rep.at_iteration = first;
  rep.pass = mismatches == 0;
  return rep;
}

void validate_eps_list(const std::vector<double>& eps_list) {
  if (eps_list.empty()) throw ParameterError("eps_list: must be non-empty");
  for (size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw ParameterError("eps_list: entries must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
      throw ParameterError("eps_list: must be strictly decreasing");
  }
}

// Per-coordinate deviation normalized by tolerance 1e-9 rel with 1e-12 abs
// floor; values > 1 are out of tolerance.
double deviation_ratio(const Vec& a, const Vec& b) {
  double worst = 0.0;
  for (int i = 0; i < a.size(); ++i) {
    const double tol = 1e-9 * std::max(std::abs(a(i)), std::abs(b(i))) + 1e-12;
    worst = std::max(worst, std::abs(a(i) - b(i)) / tol);
  }
  return worst;
}

EquivalenceResult equivalence_impl(const ProblemInstance& problem, SolverId solver,
                                   const SolverConfig& config, const Eigen::Ref<const Vec>& x0,
                                   double epsilon, double p, bool higher) {
  if (higher) {
    if (!problem.growth)
      throw StateError("problem: growth certificate required for higher-order lifting");
    if (!(p < problem.growth->exponent))
      throw ParameterError("p: must be strictly below the certificate exponent q");
  }
  if (!(epsilon > 0.0)) throw ParameterError("epsilon: must be positive");
  if (!(p >= 1.0)) throw ParameterError("p: must be >= 1");

  EquivalenceResult out;
  CheckReport& rep = out.report;
  rep.check = higher ? "higher_equivalence" : "equivalence";

  SolverConfig cfg = config;
  cfg.target_eps = epsilon;
  const Trace tf = run_solver(solver, problem, cfg, x0);
  const bool bundle = is_bundle(solver);

  double D = 0.0;
  for (const auto& r : tf.records)
    D = std::max(D, bundle ? (r.z - problem.x_star).norm() : r.dist);
  out.measured_D = D;
  const int T = tf.first_eps_index(epsilon);
  out.first_eps_index = T;
  if (T < 0) {
    rep.pass = false;
    rep.worst_residual = kInf;
    rep.note = "F-run did not reach the target accuracy";
    return out;
  }
  if (T == 0 || D == 0.0) {
    rep.pass = true;
    out.bitwise = true;
    rep.note = "trivial: x0 is already epsilon-accurate";
    return out;
  }

  const LiftedProblem lifted =
      higher ? lift_higher(problem, epsilon, p) : lift_general(problem, epsilon, D, p);
  const Trace tg = run_solver(solver, lifted.problem, cfg, x0);

  double worst = 0.0;
  int worst_at = -1;
  int first_div = -1;
  int first_bit = -1;
  bool bitwise = true;
  for (int k = 0; k <= T; ++k) {
    if (k >= static_cast<int>(tg.records.size())) {
      worst = kInf;
      worst_at = k;
      if (first_div < 0) first_div = k;
      if (first_bit < 0) first_bit = k;
      bitwise = false;
      break;
    }
    const auto& ra = tf.records[k];
    const auto& rb = tg.records[k];
    double r = deviation_ratio(ra.x, rb.x);
    if (bundle) r = std::max(r, deviation_ratio(ra.z, rb.z));
    if (r > worst) {
      worst = r;
      worst_at = k;
    }
    if (r > 1.0 && first_div < 0) first_div = k;
    const bool same = (ra.x.array() == rb.x.array()).all() &&
                      (!bundle || (ra.z.array() == rb.z.array()).all());
    if (!same && first_bit < 0) first_bit = k;
    bitwise = bitwise && same;
  }
  out.first_divergence = first_div;
  out.first_bitwise_divergence = first_bit;
  out.bitwise = bitwise;
  rep.worst_residual = worst;
  rep.at_iteration = worst_at;
  rep.pass = worst <= 1.0;

  if (rep.pass && higher) {
    // The proof's two-case floor inequality at every traced point.
    const double q = problem.growth->exponent;
    const double alpha = problem.growth->coefficient;
    const double r_threshold = std::pow(epsilon / alpha, 1.0 / q);
    WorstResidual split;
    for (const auto& r : tf.records) {
      auto check_point = [&](const Vec& pt) {
        const double rad = (pt - problem.x_star).norm();
        const double floor = lifted.floor_value(pt);
        if (rad > r_threshold)
          split.update(floor - (problem.f_star + alpha * std::pow(rad, q)), r.k);
        else
          split.update(floor - (problem.f_star + epsilon), r.k);
      };
      check_point(r.x);
      if (bundle) check_point(r.z);
    }
    if (split.value > 1e-10) {
      rep.pass = false;
      rep.worst_residual = split.value;
      rep.at_iteration = split.at;
      rep.note = "two-case floor inequality violated";
      return out;
    }
  }

  if (rep.pass) {
    rep.note = "D=" + format_double(D) + " first_eps_index=" + std::to_string(T) +
               (bitwise ? " bitwise" : "");
  } else {
    // Divergence strictly before any evaluated point enters the eps region
    // signals an implementation bug rather than a property failure.
    int enter = T;
    for (int k = 0; k <= T; ++k) {
      const auto& r = tf.records[k];
      double fmin = r.gap;
      if (bundle && !std::isnan(r.z_value)) fmin = std::min(fmin, r.z_value - problem.f_star);
      if (fmin <= epsilon) {
        enter = k;
        break;
      }
    }
    std::ostringstream note;
    if (first_div >= 0 && first_div < enter)
      note << "counterexample: divergence at index " << first_div
           << " precedes the epsilon region (implementation bug)";
    else
      note << "divergence at index " << first_div << " within the epsilon region";
    rep.note = note.str();
  }
  return out;
}

}  // namespace

std::vector<std::string> default_checks(SolverId id) {
  switch (id) {
    case SolverId::prox: return {"distance", "prox_optimality", "prox_descent"};
    case SolverId::polyak: return {"distance", "polyak_recurrence"};
    case SolverId::bundle_mc:
      return {"distance", "model_minorant", "incumbent_monotone", "subproblem_duals",
              "descent_rule"};
    case SolverId::bundle_agg:
      return {"distance", "model_minorant", "incumbent_monotone", "aggregation_identity",
              "descent_rule"};
  }
  return {};
}

std::pair<Trace, std::vector<CheckReport>> run(const ExperimentSpec& spec) {
  validate_eps_list(spec.eps_list);
  SolverConfig cfg = spec.config;
  cfg.target_eps = spec.eps_list.back();
  Trace trace = run_solver(spec.solver, spec.problem, cfg, spec.x0);

  const auto names = spec.checks.empty() ? default_checks(spec.solver) : spec.checks;
  std::vector<CheckReport> reports;
  reports.reserve(names.size());
  for (const std::string& name : names) {
    if (name == "distance")
      reports.push_back(check_distance(trace, spec.solver, spec.problem, cfg, spec.x0));
    else if (name == "prox_optimality")
      reports.push_back(prox_optimality_check(trace, spec.problem, cfg));
    else if (name == "prox_descent")
      reports.push_back(prox_descent_check(trace, cfg));
    else if (name == "polyak_recurrence")
      reports.push_back(polyak_recurrence_check(trace, spec.problem));
    else if (name == "model_minorant")
      reports.push_back(model_minorant_check(trace, spec.problem));
    else if (name == "incumbent_monotone")
      reports.push_back(incumbent_monotone_check(trace));
    else if (name == "aggregation_identity")
      reports.push_back(aggregation_identity_check(trace));
    else if (name == "subproblem_duals")
      reports.push_back(subproblem_duals_check(trace));
    else if (name == "descent_rule")
      reports.push_back(descent_rule_check(trace, cfg));
    else
      throw ParameterError("checks: unknown check '" + name + "'");
  }
  return {std::move(trace), std::move(reports)};
}

EquivalenceResult check_equivalence_detailed(const ProblemInstance& problem, SolverId solver,
                                             const SolverConfig& config,
                                             const Eigen::Ref<const Vec>& x0, double epsilon,
                                             double p) {
  return equivalence_impl(problem, solver, config, x0, epsilon, p, false);
}

CheckReport check_equivalence(const ProblemInstance& problem, SolverId solver,
                              const SolverConfig& config, const Eigen::Ref<const Vec>& x0,
                              double epsilon, double p) {
  return check_equivalence_detailed(problem, solver, config, x0, epsilon, p).report;
}

EquivalenceResult check_higher_equivalence_detailed(const ProblemInstance& problem,
                                                    SolverId solver, const SolverConfig& config,
                                                    const Eigen::Ref<const Vec>& x0,
                                                    double epsilon, double p) {
  return equivalence_impl(problem, solver, config, x0, epsilon, p, true);
}

CheckReport check_higher_equivalence(const ProblemInstance& problem, SolverId solver,
                                     const SolverConfig& config,
                                     const Eigen::Ref<const Vec>& x0, double epsilon, double p) {
  return check_higher_equivalence_detailed(problem, solver, config, x0, epsilon, p).report;
}

CheckReport check_bound(const Trace& trace, const RateBound& bound, BoundParams params,
                        const std::vector<double>& eps_list) {
  validate_eps_list(eps_list);
  CheckReport rep;
  rep.check = "bound:" + bound.name;
  double worst = -kInf;
  int at = -1;
  bool pass = true;
  std::ostringstream note;
  for (double eps : eps_list) {
    params.epsilon = eps;
    require_fields(params, bound);
    const double ceil_k = std::ceil(bound.evaluate(params));
    const int idx = trace.first_eps_index(eps);
    if (idx < 0) {
      pass = false;
      worst = kInf;
      at = trace.records.back().k;
      note << "eps=" << format_double(eps) << " never reached; ";
      continue;
    }
    const double margin = idx - ceil_k;
    if (margin > worst) {
      worst = margin;
      at = idx;
    }
    if (idx > ceil_k) {
      pass = false;
      note << "eps=" << format_double(eps) << " k=" << idx << " exceeds "
           << format_double(ceil_k) << "; ";
    }
  }
  rep.pass = pass;
  rep.worst_residual = worst;
  rep.at_iteration = at;
  rep.note = note.str();
  return rep;
}

CheckReport check_distance(const Trace& trace, SolverId solver, const ProblemInstance& problem,
                           const SolverConfig& config, const Eigen::Ref<const Vec>& x0) {
  CheckReport rep;
  rep.check = "distance";
  const double dist0 = (x0 - problem.x_star).norm();
  WorstResidual w;
  if (!is_bundle(solver)) {
    for (const auto& r : trace.records) w.update(r.dist - dist0, r.k);
    rep.pass = w.value <= 1e-9;
  } else {
    const double L = problem.lipschitz;
    const double rhs = 2.0 * (1.0 + (1.0 - config.beta) / config.beta) *
                       (dist0 * dist0 + L * L / (config.rho * config.rho));
    for (const auto& r : trace.records) {
      if (r.z.size() == 0) continue;
      w.update((r.z - problem.x_star).squaredNorm() - rhs, r.k);
    }
    rep.pass = w.value <= 1e-6;
  }
  rep.worst_residual = w.value;
  rep.at_iteration = w.at;
  return rep;
}

}  // namespace growthlift
