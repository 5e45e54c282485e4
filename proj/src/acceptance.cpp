#include "growthlift/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "growthlift/harness.hpp"
#include "growthlift/io.hpp"
#include "growthlift/subproblem.hpp"

namespace growthlift {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double uniform01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }
double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}
double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

Vec offset_x0(const ProblemInstance& P, double dist) {
  Vec d = Vec::Ones(P.dim);
  d /= d.norm();
  return P.x_star + dist * d;
}

std::string pass_detail(int pass, int total, double worst, const std::string& worst_label) {
  std::ostringstream ss;
  ss << pass << "/" << total << " ok; worst " << worst_label << " " << format_double(worst);
  return ss.str();
}

// ---------------------------------------------------------------------------
// Grid oracle for the multicut subproblem (n <= 2): coarse global grid, then
// window refinement around the best node down to step <= 1e-9. The grid can
// only confirm the exact solver: no node may ever beat it.
// ---------------------------------------------------------------------------

double primal_value(const std::vector<Cut>& cuts, const Vec& xc, double rho, const Vec& y) {
  double m = cuts[0].eval(y);
  for (size_t j = 1; j < cuts.size(); ++j) m = std::max(m, cuts[j].eval(y));
  return m + 0.5 * rho * (y - xc).squaredNorm();
}

struct GridOutcome {
  Vec argmin;
  double value = kInf;
};

GridOutcome grid_minimize(const std::vector<Cut>& cuts, const Vec& xc, double rho) {
  const int n = static_cast<int>(xc.size());
  double gmax = 0.0;
  for (const Cut& c : cuts) gmax = std::max(gmax, c.g.norm());
  const double radius0 = gmax / rho * 1.01 + 1e-3;
  double radius = radius0;
  Vec center = xc;
  GridOutcome best{xc, primal_value(cuts, xc, rho, xc)};

  const int nodes = 81;
  // Zoom in while the best node is interior; when it lands near the window
  // edge (walking a kinked valley) recenter and zoom back out so progress
  // stays multiplicative.
  for (int guard = 0; guard < 600; ++guard) {
    const double h = 2.0 * radius / (nodes - 1);
    if (n == 1) {
      Vec y(1);
      for (int i = 0; i < nodes; ++i) {
        y(0) = center(0) - radius + i * h;
        const double v = primal_value(cuts, xc, rho, y);
        if (v < best.value) {
          best.value = v;
          best.argmin = y;
        }
      }
    } else {
      Vec y(2);
      for (int i = 0; i < nodes; ++i) {
        y(0) = center(0) - radius + i * h;
        for (int j = 0; j < nodes; ++j) {
          y(1) = center(1) - radius + j * h;
          const double v = primal_value(cuts, xc, rho, y);
          if (v < best.value) {
            best.value = v;
            best.argmin = y;
          }
        }
      }
    }
    const bool on_edge = ((best.argmin - center).cwiseAbs().maxCoeff() >= radius - 1.5 * h);
    center = best.argmin;
    if (on_edge) {
      radius = std::min(2.0 * radius, radius0);
      continue;
    }
    if (h <= 1e-9) break;
    radius = 8.0 * h;
  }

  // An axis-aligned grid stalls in narrow kinked valleys (no node falls in the
  // descent cone), so additionally zoom along each kink line l_i = l_j with a
  // 1-D grid; still pure evaluation of the primal.
  if (n == 2) {
    for (size_t i = 0; i < cuts.size(); ++i) {
      for (size_t j = i + 1; j < cuts.size(); ++j) {
        const Vec dg = cuts[i].g - cuts[j].g;
        const double dg2 = dg.squaredNorm();
        if (dg2 < 1e-20) continue;
        const double rhs = (cuts[j].fz - cuts[j].g.dot(cuts[j].z)) -
                           (cuts[i].fz - cuts[i].g.dot(cuts[i].z));
        Vec anchor = xc + ((rhs - dg.dot(xc)) / dg2) * dg;  // nearest line point
        Vec u(2);
        u << -dg(1), dg(0);
        u /= u.norm();
        // Track the on-line best separately: the global best may sit off this
        // line and would otherwise pin the window at t = 0.
        double t_center = 0.0, t_radius = 2.0 * radius0 + 1.0;
        double line_best = std::numeric_limits<double>::infinity();
        for (int level = 0; level < 80; ++level) {
          const double ht = 2.0 * t_radius / (nodes - 1);
          double t_best = t_center;
          for (int a = 0; a < nodes; ++a) {
            const double t = t_center - t_radius + a * ht;
            const Vec y = anchor + t * u;
            const double v = primal_value(cuts, xc, rho, y);
            if (v < line_best) {
              line_best = v;
              t_best = t;
            }
            if (v < best.value) {
              best.value = v;
              best.argmin = y;
            }
          }
          const bool edge = std::abs(t_best - t_center) >= t_radius - 1.5 * ht;
          t_center = t_best;
          if (edge) {
            t_radius = std::min(2.0 * t_radius, 2.0 * radius0 + 1.0);
            continue;
          }
          if (ht <= 1e-10) break;
          t_radius = 8.0 * ht;
        }
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------

struct BundleRun {
  std::string label;
  SolverId solver = SolverId::bundle_mc;
  ProblemInstance problem;
  SolverConfig config;
  Vec x0;
  Trace trace;
};

struct Suite {
  std::uint64_t seed = 0;
  ProblemInstance sharp3, quad2, quad1, sharp1, maxa5, hold2;
  std::vector<BundleRun> bundle_runs;
  std::vector<CriterionResult> results;

  void add(std::string id, std::string title, bool pass, std::string detail) {
    results.push_back({std::move(id), std::move(title), pass, std::move(detail)});
  }
};

BoundParams params_for(const ProblemInstance& P, const SolverConfig& cfg, const Vec& x0) {
  BoundParams bp;
  bp.dist0 = (x0 - P.x_star).norm();
  bp.gap0 = P.value(x0) - P.f_star;
  bp.rho = cfg.rho;
  bp.beta = cfg.beta;
  bp.L = P.lipschitz;
  if (P.growth) {
    bp.alpha = P.growth->coefficient;
    bp.p = P.growth->exponent;
  }
  return bp;
}

void crit_prox_closed_form(Suite& s) {
  SolverConfig cfg;
  cfg.rho = 0.1;
  cfg.target_eps = 1e-6;
  cfg.max_iter = 100;
  const Trace tr = proximal_point(s.sharp1, cfg, Vec::Ones(1));
  bool pass = tr.records.size() == 11 && tr.termination == Termination::eps_reached;
  double worst = 0.0;
  for (const auto& r : tr.records)
    worst = std::max(worst, std::abs(r.x(0) - std::max(0.0, 1.0 - 0.1 * r.k)));
  pass = pass && worst <= 1e-12;
  // Finite termination at k=10; the minimizer is hit to within the stated
  // 1e-12 (per-step double rounding leaves ~1e-16 of the soft threshold).
  pass = pass && tr.records.back().k == 10 && std::abs(tr.records.back().gap) <= 1e-12;
  BoundParams bp;
  bp.gap0 = 1.0;
  bp.rho = 0.1;
  bp.alpha = 1.0;
  const double bound = k_prox_sharp(bp);
  pass = pass && 10.0 <= std::ceil(bound);
  std::ostringstream ss;
  ss << tr.records.size() << " rows, worst |x_k - (1-0.1k)_+| = " << format_double(worst)
     << ", minimizer at k=10 (gap " << format_double(tr.records.back().gap) << ") <= bound "
     << format_double(bound);
  s.add("c01", "prox on |x|: closed-form trajectory within bound", pass, ss.str());
}

void crit_polyak_geometric(Suite& s) {
  SolverConfig cfg;
  cfg.target_eps = 1e-6;
  cfg.max_iter = 100;
  const Trace tr = subgradient_polyak(s.quad1, cfg, Vec::Ones(1));
  double worst = 0.0;
  bool strict = true;
  for (size_t k = 0; k < tr.records.size(); ++k) {
    const double expect = std::pow(2.0, -static_cast<double>(k));
    worst = std::max(worst, std::abs(tr.records[k].x(0) - expect) / expect);
    if (k > 0) strict = strict && tr.records[k].dist < tr.records[k - 1].dist;
  }
  const bool pass = worst <= 1e-12 && strict && tr.records.back().k == 10;
  std::ostringstream ss;
  ss << "worst rel dev from 2^-k = " << format_double(worst) << ", distances strictly decreasing "
     << (strict ? "yes" : "NO") << ", stopped at k=" << tr.records.back().k;
  s.add("c02", "polyak on x^2: geometric iterates, decreasing distances", pass, ss.str());
}

void crit_subgradient_recurrence(Suite& s) {
  std::mt19937_64 rng(s.seed + 101);
  int ok = 0;
  double worst = -kInf;
  const int total = 20;
  for (int i = 0; i < total; ++i) {
    const int n = 2 + i % 4;
    BuiltinParams params;
    params.extra_pieces = 4 + i % 5;
    const ProblemInstance P =
        make_builtin(BuiltinKind::max_affine, n, params, s.seed + 1000 + i);
    Vec dir(n);
    for (int d = 0; d < n; ++d) dir(d) = 2.0 * uniform01(rng) - 1.0;
    dir /= dir.norm();
    const Vec x0 = P.x_star + 1.5 * dir;
    SolverConfig cfg;
    cfg.target_eps = 1e-6;
    cfg.max_iter = 300000;
    const Trace tr = subgradient_polyak(P, cfg, x0);
    const double L2 = P.lipschitz * P.lipschitz;
    double v = -kInf;
    for (size_t k = 0; k + 1 < tr.records.size(); ++k) {
      const auto& a = tr.records[k];
      const auto& b = tr.records[k + 1];
      v = std::max(v, b.dist * b.dist - (a.dist * a.dist - a.gap * a.gap / L2));
    }
    worst = std::max(worst, v);
    if (v <= 1e-9) ++ok;
  }
  s.add("c03", "polyak recurrence inequality on random max-affine problems", ok == total,
        pass_detail(ok, total, worst, "violation"));
}

void crit_lifting_equivalence(Suite& s) {
  struct Combo {
    SolverId solver;
    const ProblemInstance* problem;
    const char* label;
  };
  std::vector<Combo> combos;
  for (SolverId sid : {SolverId::polyak, SolverId::bundle_mc, SolverId::bundle_agg}) {
    combos.push_back({sid, &s.sharp3, "sharp_norm"});
    combos.push_back({sid, &s.quad2, "quadratic_norm"});
    combos.push_back({sid, &s.maxa5, "max_affine"});
  }
  combos.push_back({SolverId::prox, &s.sharp3, "sharp_norm"});
  combos.push_back({SolverId::prox, &s.quad2, "quadratic_norm"});
  combos.push_back({SolverId::prox, &s.hold2, "holder_norm"});

  int ok = 0, total = 0;
  double worst = 0.0;
  std::string worst_case;
  for (const Combo& c : combos) {
    for (double eps : {1e-2, 1e-4}) {
      for (double p : {1.0, 2.0}) {
        SolverConfig cfg;
        cfg.rho = (c.solver == SolverId::prox) ? 0.5 : 1.0;
        cfg.beta = 0.5;
        cfg.max_iter = 200000;
        const Vec x0 = offset_x0(*c.problem, 1.5);
        const EquivalenceResult res =
            check_equivalence_detailed(*c.problem, c.solver, cfg, x0, eps, p);
        ++total;
        if (res.report.pass) ++ok;
        if (res.report.worst_residual > worst) {
          worst = res.report.worst_residual;
          worst_case = std::string(to_string(c.solver)) + "/" + c.label;
        }
      }
    }
  }
  std::ostringstream ss;
  ss << ok << "/" << total << " pairs agree; worst normalized deviation " << format_double(worst)
     << (worst_case.empty() ? "" : " (" + worst_case + ")");
  s.add("c04", "trace equivalence under growth-floored lifting", ok == total, ss.str());
}

void crit_higher_equivalence(Suite& s) {
  int ok = 0, total = 0;
  double worst = 0.0;
  for (SolverId sid : {SolverId::polyak, SolverId::bundle_mc, SolverId::bundle_agg}) {
    for (double eps : {1e-2, 1e-4}) {
      SolverConfig cfg;
      cfg.rho = 1.0;
      cfg.beta = 0.5;
      cfg.max_iter = 200000;
      const Vec x0 = offset_x0(s.quad2, 1.5);
      const EquivalenceResult res =
          check_higher_equivalence_detailed(s.quad2, sid, cfg, x0, eps, 1.0);
      ++total;
      if (res.report.pass) ++ok;
      worst = std::max(worst, res.report.worst_residual);
    }
  }
  s.add("c05", "higher-order lifting equivalence with two-case floor check", ok == total,
        pass_detail(ok, total, worst, "normalized deviation"));
}

void crit_bound_compliance(Suite& s, bool report) {
  const std::vector<double> eps_list = {1e-2, 1e-4, 1e-6};
  int ok = 0, total = 0;
  double worst = -kInf;
  std::ostringstream fails;

  auto run_case = [&](const char* label, SolverId sid, const ProblemInstance& P,
                      const std::string& bound_name, double rho, bool reg) {
    SolverConfig cfg;
    cfg.rho = rho;
    cfg.beta = 0.5;
    cfg.max_iter = 200000;
    cfg.target_eps = eps_list.back();
    const Vec x0 = offset_x0(P, 1.0);
    const Trace tr = run_solver(sid, P, cfg, x0);
    if (reg) s.bundle_runs.push_back({label, sid, P, cfg, x0, tr});
    const CheckReport rep = check_bound(tr, find_bound(bound_name), params_for(P, cfg, x0),
                                        eps_list);
    ++total;
    if (rep.pass) ++ok;
    else fails << label << ": " << rep.note << " ";
    worst = std::max(worst, rep.worst_residual);
  };

  run_case("prox/quadratic", SolverId::prox, s.quad2, "k_prox_quadratic", 0.5, false);
  run_case("prox/sharp", SolverId::prox, s.sharp3, "k_prox_sharp", 0.1, false);
  run_case("polyak/quadratic", SolverId::polyak, s.quad2, "k_subgrad_quadratic", 1.0, false);
  run_case("polyak/sharp", SolverId::polyak, s.sharp3, "k_subgrad_sharp", 1.0, false);
  run_case("polyak/max_affine", SolverId::polyak, s.maxa5, "k_subgrad_sharp", 1.0, false);
  run_case("bundle-mc/quadratic", SolverId::bundle_mc, s.quad2, "k_bundle_quadratic", 1.0, true);
  run_case("bundle-agg/quadratic", SolverId::bundle_agg, s.quad2, "k_bundle_quadratic", 1.0,
           true);

  if (!report) return;
  std::ostringstream ss;
  ss << ok << "/" << total << " bound checks pass; worst k - ceil(bound) = "
     << format_double(worst) << " " << fails.str();
  s.add("c06", "iterations-to-eps never exceed the matching bound", ok == total, ss.str());
}

void crit_lifted_bound_algebra(Suite& s) {
  std::mt19937_64 rng(s.seed + 202);
  const RateBound prox_quad = find_bound("k_prox_quadratic");
  const RateBound prox_sharp = find_bound("k_prox_sharp");
  const RateBound sub_quad = find_bound("k_subgrad_quadratic");
  const RateBound sub_sharp = find_bound("k_subgrad_sharp");
  const RateBound g_prox_quad = lift_general_bound(prox_quad, 2.0);
  const RateBound g_prox_sharp = lift_general_bound(prox_sharp, 1.0);
  const RateBound h_prox_sharp = lift_higher_bound(prox_sharp, 1.0, 2.0);
  const RateBound g_sub_sharp = lift_general_bound(sub_sharp, 1.0);
  const RateBound h_sub_sharp = lift_higher_bound(sub_sharp, 1.0, 2.0);
  const RateBound g_sub_quad = lift_general_bound(sub_quad, 2.0);

  int ok = 0;
  const int total = 100;
  double worst = 0.0;
  for (int i = 0; i < total; ++i) {
    BoundParams P;
    P.rho = log_uniform(rng, 0.1, 10.0);
    P.alpha = log_uniform(rng, 0.2, 5.0);
    P.L = log_uniform(rng, 0.5, 20.0);
    P.dist0 = log_uniform(rng, 0.3, 8.0);
    P.gap0 = log_uniform(rng, 0.1, 50.0);
    P.epsilon = log_uniform(rng, 1e-6, P.gap0 / 2.0);
    P.D = P.dist0;

    const double d2 = P.dist0 * P.dist0;
    const double log_gap = std::log(P.gap0 / P.epsilon);
    const double log_ld = clamped_log(P.L * P.dist0 / P.epsilon);
    struct Pair {
      double got, want;
    };
    const Pair pairs[6] = {
        {g_prox_quad.evaluate(P),
         log_gap / std::log1p(P.rho * P.epsilon / (2.0 * d2))},
        {g_prox_sharp.evaluate(P), 2.0 * P.gap0 * d2 / (P.rho * P.epsilon * P.epsilon)},
        {h_prox_sharp.evaluate(P), 2.0 * P.gap0 / (P.rho * P.alpha * P.epsilon)},
        {g_sub_sharp.evaluate(P),
         2.0 * P.L * P.L * d2 / (P.epsilon * P.epsilon) * log_ld},
        {h_sub_sharp.evaluate(P), 2.0 * P.L * P.L / (P.alpha * P.epsilon) * log_ld},
        {g_sub_quad.evaluate(P),
         2.0 * P.L * P.L * d2 / (P.epsilon * P.epsilon) * log_ld},
    };
    double v = 0.0;
    for (const Pair& pr : pairs)
      v = std::max(v, std::abs(pr.got - pr.want) / std::max(std::abs(pr.want), 1e-300));
    worst = std::max(worst, v);
    if (v <= 1e-12) ++ok;
  }
  s.add("c07", "lifted bound formulas match their closed-form displays", ok == total,
        pass_detail(ok, total, worst, "rel dev"));
}

void crit_subproblem_oracle(Suite& s) {
  std::mt19937_64 rng(s.seed + 303);
  int ok = 0;
  const int total = 50;
  double worst_arg = 0.0, worst_val = 0.0, worst_rec = 0.0;
  for (int i = 0; i < total; ++i) {
    const int n = 1 + i % 2;
    const int m = 1 + i % 3;
    const double rho = (i % 3 == 0) ? 0.5 : (i % 3 == 1 ? 1.0 : 2.0);
    std::vector<Cut> cuts;
    for (int j = 0; j < m; ++j) {
      Vec z(n), g(n);
      for (int d = 0; d < n; ++d) {
        z(d) = uniform(rng, -1.0, 1.0);
        g(d) = uniform(rng, -2.0, 2.0);
      }
      cuts.push_back({z, uniform(rng, -1.0, 1.0), g});
    }
    Vec xc(n);
    for (int d = 0; d < n; ++d) xc(d) = uniform(rng, -1.0, 1.0);

    const SubproblemSolution sol = solve_multicut_subproblem(cuts, xc, rho);
    const GridOutcome grid = grid_minimize(cuts, xc, rho);
    const double solver_val = primal_value(cuts, xc, rho, sol.z);
    const double arg_dev = (sol.z - grid.argmin).cwiseAbs().maxCoeff();
    const double val_dev = std::abs(grid.value - solver_val);
    const bool no_beats = grid.value >= solver_val - 1e-10;
    worst_arg = std::max(worst_arg, arg_dev);
    worst_val = std::max(worst_val, val_dev);
    worst_rec = std::max(worst_rec, sol.recovery_residual);
    if (arg_dev <= 1e-5 && val_dev <= 1e-8 && sol.recovery_residual <= 1e-10 && no_beats) ++ok;
  }
  std::ostringstream ss;
  ss << ok << "/" << total << " instances; worst arg dev " << format_double(worst_arg)
     << ", value dev " << format_double(worst_val) << ", recovery " << format_double(worst_rec);
  s.add("c08", "multicut subproblem matches grid minimization", ok == total, ss.str());
}

void crit_aggregation_identity(Suite& s) {
  double worst = 0.0;
  int runs = 0;
  bool pass = true;
  for (const BundleRun& br : s.bundle_runs) {
    if (br.solver != SolverId::bundle_agg) continue;
    ++runs;
    worst = std::max(worst, br.trace.agg_identity.value);
    pass = pass && br.trace.agg_identity.value <= 1e-10;
  }
  std::ostringstream ss;
  ss << runs << " aggregation runs; worst ||grad agg - rho(x-z)|| = " << format_double(worst);
  s.add("c09", "aggregate-gradient identity on every aggregation run", pass && runs > 0,
        ss.str());
}

void crit_bundle_distance(Suite& s) {
  double worst = -kInf;
  bool pass = true;
  for (const BundleRun& br : s.bundle_runs) {
    const CheckReport rep = check_distance(br.trace, br.solver, br.problem, br.config, br.x0);
    pass = pass && rep.pass;
    worst = std::max(worst, rep.worst_residual);
  }
  std::ostringstream ss;
  ss << s.bundle_runs.size() << " bundle runs; worst ||z-x*||^2 - rhs = " << format_double(worst);
  s.add("c10", "bundle query points obey the distance bound", pass && !s.bundle_runs.empty(),
        ss.str());
}

void crit_model_lower_bound(Suite& s) {
  double worst_model = -kInf, worst_mono = -kInf;
  bool pass = true;
  for (const BundleRun& br : s.bundle_runs) {
    // model minorant at 1000 sampled points per run
    {
      std::mt19937_64 rng(s.seed + 404);
      double w = -kInf;
      for (int i = 0; i < 1000; ++i) {
        Vec y(br.problem.dim);
        const double rad = std::max(2.0, 2.0 * (br.x0 - br.problem.x_star).norm());
        for (int d = 0; d < br.problem.dim; ++d)
          y(d) = br.problem.x_star(d) + rad * (2.0 * uniform01(rng) - 1.0);
        double model = -kInf;
        for (const Cut& c : br.trace.cuts) model = std::max(model, c.eval(y));
        w = std::max(w, model - br.problem.value(y));
      }
      worst_model = std::max(worst_model, w);
      pass = pass && w <= 1e-10;
    }
    for (size_t k = 1; k < br.trace.records.size(); ++k) {
      const double inc = br.trace.records[k].value - br.trace.records[k - 1].value;
      worst_mono = std::max(worst_mono, inc);
      pass = pass && inc <= 0.0;
    }
  }
  std::ostringstream ss;
  ss << s.bundle_runs.size() << " bundle runs; worst model - F = " << format_double(worst_model)
     << ", worst incumbent increase = " << format_double(worst_mono);
  s.add("c11", "cutting-plane models minorize F; incumbents nonincreasing",
        pass && !s.bundle_runs.empty(), ss.str());
}

// Additional bundle runs so c09-c11 cover more than the c06 pair.
void collect_extra_bundle_runs(Suite& s) {
  for (SolverId sid : {SolverId::bundle_mc, SolverId::bundle_agg}) {
    for (const ProblemInstance* P : {&s.sharp3, &s.quad2, &s.maxa5}) {
      SolverConfig cfg;
      cfg.rho = 1.0;
      cfg.beta = 0.5;
      cfg.max_iter = 200000;
      cfg.target_eps = 1e-4;
      const Vec x0 = offset_x0(*P, 1.5);
      Trace tr = run_solver(sid, *P, cfg, x0);
      s.bundle_runs.push_back({to_string(sid), sid, *P, cfg, x0, std::move(tr)});
    }
  }
}

}  // namespace

std::vector<std::string> acceptance_ids() {
  return {"c01", "c02", "c03", "c04", "c05", "c06", "c07", "c08", "c09", "c10", "c11"};
}

std::vector<CriterionResult> run_acceptance(std::uint64_t seed, const std::string& only_id) {
  if (!only_id.empty()) {
    const auto ids = acceptance_ids();
    if (std::find(ids.begin(), ids.end(), only_id) == ids.end())
      throw ParameterError("only: unknown criterion id '" + only_id + "'");
  }

  Suite s;
  s.seed = seed;
  BuiltinParams def;
  s.sharp1 = make_builtin(BuiltinKind::sharp_norm, 1, def, seed);
  s.quad1 = make_builtin(BuiltinKind::quadratic_norm, 1, def, seed);
  s.sharp3 = make_builtin(BuiltinKind::sharp_norm, 3, def, seed);
  s.quad2 = make_builtin(BuiltinKind::quadratic_norm, 2, def, seed);
  BuiltinParams maxa;
  maxa.extra_pieces = 8;
  s.maxa5 = make_builtin(BuiltinKind::max_affine, 5, maxa, seed + 7);
  BuiltinParams hold;
  hold.exponent = 3.0;
  s.hold2 = make_builtin(BuiltinKind::holder_norm, 2, hold, seed);

  auto want = [&](const char* id) { return only_id.empty() || only_id == id; };
  const bool need_registry = want("c09") || want("c10") || want("c11");

  if (want("c01")) crit_prox_closed_form(s);
  if (want("c02")) crit_polyak_geometric(s);
  if (want("c03")) crit_subgradient_recurrence(s);
  if (want("c04")) crit_lifting_equivalence(s);
  if (want("c05")) crit_higher_equivalence(s);
  // c09-c11 quantify over the suite's fixed bundle-run population, so those
  // runs execute whenever any of c06, c09-c11 is requested.
  if (want("c06") || need_registry) crit_bound_compliance(s, want("c06"));
  if (need_registry) collect_extra_bundle_runs(s);
  if (want("c07")) crit_lifted_bound_algebra(s);
  if (want("c08")) crit_subproblem_oracle(s);
  if (want("c09")) crit_aggregation_identity(s);
  if (want("c10")) crit_bundle_distance(s);
  if (want("c11")) crit_model_lower_bound(s);

  std::sort(s.results.begin(), s.results.end(),
            [](const CriterionResult& a, const CriterionResult& b) { return a.id < b.id; });
  if (!only_id.empty()) {
    std::vector<CriterionResult> filtered;
    for (auto& r : s.results)
      if (r.id == only_id) filtered.push_back(std::move(r));
    return filtered;
  }
  return s.results;
}

std::string criteria_to_json(const std::vector<CriterionResult>& results, std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  bool all = true;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const CriterionResult& r : results) {
    nlohmann::ordered_json o;
    o["id"] = r.id;
    o["title"] = r.title;
    o["pass"] = r.pass;
    o["detail"] = r.detail;
    arr.push_back(o);
    all = all && r.pass;
  }
  j["criteria"] = arr;
  j["all_pass"] = all;
  return j.dump(2);
}

}  // namespace growthlift
