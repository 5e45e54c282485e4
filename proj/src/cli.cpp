#include "growthlift/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "growthlift/acceptance.hpp"
#include "growthlift/harness.hpp"
#include "growthlift/io.hpp"

namespace growthlift {

namespace {

struct SolveArgs {
  std::string problem, method, x0, out, report;
  double rho = -1.0;
  double beta = 0.5;
  double eps = 1e-6;
  double eps_stop = 0.0;
  int max_iter = 100000;
};

struct BoundsArgs {
  std::string name, params, lift;
};

struct LiftCheckArgs {
  std::string problem, method, x0;
  double eps = 1e-4;
  double p = 1.0;
  double q = -1.0;
  double rho = 1.0;
  double beta = 0.5;
  int max_iter = 200000;
};

struct BenchArgs {
  std::string problem, method, bound, eps_list, x0;
  double rho = 1.0;
  double beta = 0.5;
  int max_iter = 200000;
};

struct ValidateArgs {
  std::string only, out;
};

SolverConfig to_config(double rho, double beta, double eps_stop, int max_iter, double eps) {
  SolverConfig cfg;
  cfg.rho = rho;
  cfg.beta = beta;
  cfg.eps_stop = eps_stop;
  cfg.max_iter = max_iter;
  cfg.target_eps = eps;
  return cfg;
}

Vec default_x0(const ProblemInstance& P) {
  Vec d = Vec::Ones(P.dim);
  d /= d.norm();
  return P.x_star + 1.5 * d;
}

int run_solve(const SolveArgs& a) {
  const ProblemInstance P = build(load_problem_spec(a.problem));
  const SolverId id = parse_solver(a.method);
  if (id != SolverId::polyak && !(a.rho > 0.0))
    throw ParameterError("rho: required (positive) for method " + a.method);
  const SolverConfig cfg =
      to_config(a.rho > 0.0 ? a.rho : 1.0, a.beta, a.eps_stop, a.max_iter, a.eps);
  const Vec x0 = parse_vec(a.x0);

  Trace tr;
  if (a.report.empty()) {
    tr = run_solver(id, P, cfg, x0);
  } else {
    ExperimentSpec spec;
    spec.problem = P;
    spec.solver = id;
    spec.config = cfg;
    spec.x0 = x0;
    spec.eps_list = {a.eps};
    auto [trace, reports] = run(spec);
    tr = std::move(trace);
    std::ofstream rep(a.report, std::ios::binary);
    if (!rep) throw ParameterError("report: cannot open '" + a.report + "' for writing");
    rep << reports_to_json(reports) << "\n";
  }
  std::ofstream out(a.out, std::ios::binary);
  if (!out) throw ParameterError("out: cannot open '" + a.out + "' for writing");
  write_trace_csv(out, tr);
  std::cout << "termination=" << to_string(tr.termination)
            << " iterations=" << tr.records.back().k
            << " final_gap=" << format_double(tr.records.back().gap) << "\n";
  return tr.termination == Termination::max_iter ? 2 : 0;
}

int run_bounds(const BoundsArgs& a) {
  const BoundParams P = load_bound_params(a.params);
  const RateBound& base = find_bound(a.name);
  require_fields(P, base);
  std::cout << format_double(base.evaluate(P)) << "\n";
  if (!a.lift.empty()) {
    RateBound lifted;
    if (a.lift.rfind("general:", 0) == 0) {
      const double p = std::stod(a.lift.substr(8));
      lifted = lift_general_bound(base, p);
    } else if (a.lift.rfind("higher:", 0) == 0) {
      const std::string rest = a.lift.substr(7);
      const auto comma = rest.find(',');
      if (comma == std::string::npos)
        throw ParameterError("lift: higher form is 'higher:p,q'");
      lifted = lift_higher_bound(base, std::stod(rest.substr(0, comma)),
                                 std::stod(rest.substr(comma + 1)));
    } else {
      throw ParameterError("lift: expected 'general:p' or 'higher:p,q'");
    }
    require_fields(P, lifted);
    std::cout << format_double(lifted.evaluate(P)) << "\n";
  }
  return 0;
}

int run_lift_check(const LiftCheckArgs& a) {
  const ProblemInstance P = build(load_problem_spec(a.problem));
  const SolverId id = parse_solver(a.method);
  const SolverConfig cfg = to_config(a.rho, a.beta, 0.0, a.max_iter, a.eps);
  const Vec x0 = a.x0.empty() ? default_x0(P) : parse_vec(a.x0);

  EquivalenceResult res;
  if (a.q > 0.0) {
    if (!(a.p < a.q)) throw ParameterError("p: must satisfy p < q");
    if (!P.growth) throw StateError("problem: growth certificate required for --q");
    if (std::abs(P.growth->exponent - a.q) > 1e-12)
      throw ParameterError("q: does not match the problem's certificate exponent " +
                           format_double(P.growth->exponent));
    res = check_higher_equivalence_detailed(P, id, cfg, x0, a.eps, a.p);
  } else {
    res = check_equivalence_detailed(P, id, cfg, x0, a.eps, a.p);
  }
  if (res.report.pass) {
    std::cout << "PASS D=" << format_double(res.measured_D)
              << " first_eps_index=" << res.first_eps_index
              << " first_divergence=" << res.first_divergence
              << (res.bitwise ? " bitwise" : "") << "\n";
    return 0;
  }
  std::cout << "FAIL first_divergence=" << res.first_divergence << " " << res.report.note
            << "\n";
  return 1;
}

int run_bench(const BenchArgs& a) {
  const ProblemInstance P = build(load_problem_spec(a.problem));
  const SolverId id = parse_solver(a.method);
  const RateBound& bound = find_bound(a.bound);
  const Vec eps_vec = parse_vec(a.eps_list);
  std::vector<double> eps_list(eps_vec.data(), eps_vec.data() + eps_vec.size());
  const SolverConfig cfg =
      to_config(a.rho, a.beta, 0.0, a.max_iter, *std::min_element(eps_list.begin(), eps_list.end()));
  const Vec x0 = a.x0.empty() ? default_x0(P) : parse_vec(a.x0);
  const Trace tr = run_solver(id, P, cfg, x0);

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
  bp.D = bp.dist0;
  std::cout << "eps,k_observed,bound,ok\n";
  for (double eps : eps_list) {
    bp.epsilon = eps;
    require_fields(bp, bound);
    const double K = std::ceil(bound.evaluate(bp));
    const int k = tr.first_eps_index(eps);
    std::cout << format_double(eps) << ',' << k << ',' << format_double(K) << ','
              << ((k >= 0 && k <= K) ? "yes" : "no") << "\n";
  }
  return 0;
}

int run_validate(const ValidateArgs& a) {
  const std::uint64_t seed = default_seed();
  const auto results = run_acceptance(seed, a.only);
  const std::string json = criteria_to_json(results, seed);
  std::cout << json << "\n";
  if (!a.out.empty()) {
    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw ParameterError("out: cannot open '" + a.out + "' for writing");
    out << json << "\n";
  }
  for (const auto& r : results)
    if (!r.pass) return 1;
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"growthlift: nonsmooth convex optimization lab"};
  app.require_subcommand(1);
  bool timestamp = false;
  app.add_flag("--timestamp", timestamp, "prepend a timestamp line to stdout");

  SolveArgs sa;
  CLI::App* solve = app.add_subcommand("solve", "run a solver and write a trace CSV");
  solve->add_option("--problem", sa.problem, "problem spec JSON path")->required();
  solve->add_option("--method", sa.method, "prox|polyak|bundle-mc|bundle-agg")->required();
  solve->add_option("--rho", sa.rho, "prox/bundle stepsize");
  solve->add_option("--beta", sa.beta, "bundle descent fraction");
  solve->add_option("--eps", sa.eps, "target objective gap");
  solve->add_option("--eps-stop", sa.eps_stop, "bundle model-gap stop threshold");
  solve->add_option("--max-iter", sa.max_iter, "iteration budget");
  solve->add_option("--x0", sa.x0, "comma-separated start point")->required();
  solve->add_option("--out", sa.out, "trace CSV output path")->required();
  solve->add_option("--report", sa.report, "also run the invariant checks and write them as JSON");

  BoundsArgs ba;
  CLI::App* bounds = app.add_subcommand("bounds", "evaluate a named iteration bound");
  bounds->add_option("--name", ba.name, "bound name")->required();
  bounds->add_option("--params", ba.params, "bound params JSON path")->required();
  bounds->add_option("--lift", ba.lift, "general:p or higher:p,q");

  LiftCheckArgs la;
  CLI::App* lift = app.add_subcommand("lift-check", "trace-equivalence check against the "
                                                    "growth-floored auxiliary function");
  lift->add_option("--problem", la.problem, "problem spec JSON path")->required();
  lift->add_option("--method", la.method, "prox|polyak|bundle-mc|bundle-agg")->required();
  lift->add_option("--eps", la.eps, "target accuracy")->required();
  lift->add_option("--p", la.p, "floor exponent")->required();
  lift->add_option("--q", la.q, "certificate exponent (higher-order lifting)");
  lift->add_option("--rho", la.rho, "prox/bundle stepsize");
  lift->add_option("--beta", la.beta, "bundle descent fraction");
  lift->add_option("--max-iter", la.max_iter, "iteration budget");
  lift->add_option("--x0", la.x0, "start point (default: x* + 1.5 unit offset)");

  BenchArgs na;
  CLI::App* bench = app.add_subcommand("bench", "observed iterations vs a named bound");
  bench->add_option("--problem", na.problem, "problem spec JSON path")->required();
  bench->add_option("--method", na.method, "prox|polyak|bundle-mc|bundle-agg")->required();
  bench->add_option("--bound", na.bound, "bound name")->required();
  bench->add_option("--eps-list", na.eps_list, "comma-separated decreasing eps values")
      ->required();
  bench->add_option("--rho", na.rho, "prox/bundle stepsize");
  bench->add_option("--beta", na.beta, "bundle descent fraction");
  bench->add_option("--max-iter", na.max_iter, "iteration budget");
  bench->add_option("--x0", na.x0, "start point (default: x* + 1.5 unit offset)");

  ValidateArgs va;
  CLI::App* validate = app.add_subcommand("validate", "run the acceptance suite");
  validate->add_option("--only", va.only, "run a single criterion id (c01..c11)");
  validate->add_option("--out", va.out, "also write the JSON summary to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  if (timestamp) {
    const auto now = std::chrono::system_clock::now();
    std::cout << "# " << std::chrono::duration_cast<std::chrono::seconds>(
                             now.time_since_epoch())
                             .count()
              << "\n";
  }

  try {
    if (solve->parsed()) return run_solve(sa);
    if (bounds->parsed()) return run_bounds(ba);
    if (lift->parsed()) return run_lift_check(la);
    if (bench->parsed()) return run_bench(na);
    if (validate->parsed()) return run_validate(va);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

int cli_main(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  static const char* prog = "growthlift";
  argv.push_back(prog);
  for (const std::string& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace growthlift
