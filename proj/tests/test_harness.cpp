#include <doctest.h>

#include <cmath>

#include "growthlift/harness.hpp"

using namespace growthlift;

namespace {

ProblemInstance builtin(BuiltinKind kind, int n, std::uint64_t seed = 0) {
  BuiltinParams params;
  return make_builtin(kind, n, params, seed);
}

Vec offset(const ProblemInstance& P, double dist) {
  Vec d = Vec::Ones(P.dim);
  d /= d.norm();
  return P.x_star + dist * d;
}

}  // namespace

TEST_CASE("run truncates at the smallest epsilon and evaluates default checks") {
  ExperimentSpec spec;
  spec.problem = builtin(BuiltinKind::sharp_norm, 1);
  spec.solver = SolverId::prox;
  spec.config.rho = 0.1;
  spec.x0 = Vec::Ones(1);
  spec.eps_list = {1e-2, 1e-4, 1e-6};
  const auto [trace, reports] = run(spec);
  CHECK(trace.records.back().k == 10);
  CHECK(trace.records.back().gap <= 1e-6);
  REQUIRE(reports.size() == 3);
  for (const auto& r : reports) {
    CAPTURE(r.check);
    CHECK(r.pass);
  }
}

TEST_CASE("run on polyak x^2 stops at k=10 for eps=1e-6") {
  ExperimentSpec spec;
  spec.problem = builtin(BuiltinKind::quadratic_norm, 1);
  spec.solver = SolverId::polyak;
  spec.x0 = Vec::Ones(1);
  spec.eps_list = {1e-6};
  const auto [trace, reports] = run(spec);
  CHECK(trace.records.back().k == 10);
  for (const auto& r : reports) CHECK(r.pass);
}

TEST_CASE("run from the minimizer is a single-row trace") {
  ExperimentSpec spec;
  spec.problem = builtin(BuiltinKind::quadratic_norm, 3);
  spec.solver = SolverId::polyak;
  spec.x0 = spec.problem.x_star;
  spec.eps_list = {1e-8};
  const auto [trace, reports] = run(spec);
  CHECK(trace.records.size() == 1);
  for (const auto& r : reports) CHECK(r.pass);
}

TEST_CASE("run validates the eps list and check names") {
  ExperimentSpec spec;
  spec.problem = builtin(BuiltinKind::quadratic_norm, 1);
  spec.solver = SolverId::polyak;
  spec.x0 = Vec::Ones(1);
  spec.eps_list = {};
  CHECK_THROWS_AS((void)run(spec), ParameterError);
  spec.eps_list = {1e-2, 1e-2};
  CHECK_THROWS_AS((void)run(spec), ParameterError);
  spec.eps_list = {1e-2, -1.0};
  CHECK_THROWS_AS((void)run(spec), ParameterError);
  spec.eps_list = {1e-4};
  spec.checks = {"no_such_check"};
  CHECK_THROWS_AS((void)run(spec), ParameterError);
}

TEST_CASE("equivalence check is bitwise on polyak/max_affine") {
  BuiltinParams params;
  const auto P = make_builtin(BuiltinKind::max_affine, 2, params, 7);
  SolverConfig cfg;
  const auto res =
      check_equivalence_detailed(P, SolverId::polyak, cfg, offset(P, 1.5), 1e-3, 1.0);
  CHECK(res.report.pass);
  CHECK(res.bitwise);
  CHECK(res.first_divergence == -1);
  CHECK(res.measured_D > 0.0);
}

TEST_CASE("equivalence check covers the radial prox route") {
  const auto P = builtin(BuiltinKind::sharp_norm, 1);
  SolverConfig cfg;
  cfg.rho = 0.25;
  const auto res = check_equivalence_detailed(P, SolverId::prox, cfg, Vec::Ones(1), 1e-3, 2.0);
  CHECK(res.report.pass);  // tolerance-level: closed form vs floored bisection
}

TEST_CASE("equivalence with eps above the initial gap passes trivially") {
  const auto P = builtin(BuiltinKind::quadratic_norm, 2);
  SolverConfig cfg;
  const auto res =
      check_equivalence_detailed(P, SolverId::polyak, cfg, offset(P, 1.0), 10.0, 1.0);
  CHECK(res.report.pass);
  CHECK(res.first_eps_index == 0);
}

TEST_CASE("higher-order equivalence on quadratic growth") {
  const auto P = builtin(BuiltinKind::quadratic_norm, 2);
  SolverConfig cfg;
  SUBCASE("polyak passes with the case split verified") {
    const auto res =
        check_higher_equivalence_detailed(P, SolverId::polyak, cfg, offset(P, 1.0), 1e-2, 1.0);
    CHECK(res.report.pass);
  }
  SUBCASE("trivial from the minimizer") {
    const auto res =
        check_higher_equivalence_detailed(P, SolverId::polyak, cfg, P.x_star, 1e-2, 1.0);
    CHECK(res.report.pass);
  }
  SUBCASE("p >= certificate exponent is rejected") {
    CHECK_THROWS_AS(
        (void)check_higher_equivalence(P, SolverId::polyak, cfg, offset(P, 1.0), 1e-2, 2.0),
        ParameterError);
  }
}

TEST_CASE("prox + higher-order floor legitimately diverges at the final index") {
  // The prox target at the first eps-accurate step lies where the sqrt(alpha
  // eps) floor strictly dominates, so prox on G must leave the F path exactly
  // there -- and only there.
  const auto P = builtin(BuiltinKind::quadratic_norm, 1);
  SolverConfig cfg;
  cfg.rho = 0.5;
  const auto res =
      check_higher_equivalence_detailed(P, SolverId::prox, cfg, Vec::Ones(1), 1e-2, 1.0);
  CHECK_FALSE(res.report.pass);
  CHECK(res.first_divergence == res.first_eps_index);
  CHECK(res.report.note.find("within the epsilon region") != std::string::npos);
  CHECK(res.report.note.find("implementation bug") == std::string::npos);
}

TEST_CASE("check_bound compares first-eps indices against ceilings") {
  const auto P = builtin(BuiltinKind::sharp_norm, 1);
  SolverConfig cfg;
  cfg.rho = 0.1;
  cfg.target_eps = 1e-6;
  const Trace tr = proximal_point(P, cfg, Vec::Ones(1));
  BoundParams params;
  params.gap0 = 1.0;
  params.rho = 0.1;
  params.alpha = 1.0;
  const auto ok = check_bound(tr, find_bound("k_prox_sharp"), params, {1e-2, 1e-6});
  CHECK(ok.pass);
  CHECK(ok.worst_residual <= 0.0);
  // shrink gap0 to force an absurdly small ceiling
  params.gap0 = 1e-3;
  const auto bad = check_bound(tr, find_bound("k_prox_sharp"), params, {1e-6});
  CHECK_FALSE(bad.pass);
  CHECK(bad.worst_residual > 0.0);
}

TEST_CASE("check_distance matches the per-solver contracts") {
  SolverConfig cfg;
  SUBCASE("prox and polyak distances never exceed the start distance") {
    const auto P = builtin(BuiltinKind::quadratic_norm, 2);
    const Vec x0 = offset(P, 1.0);
    for (SolverId id : {SolverId::prox, SolverId::polyak}) {
      SolverConfig c = cfg;
      c.rho = 0.5;
      c.target_eps = 1e-8;
      const Trace tr = run_solver(id, P, c, x0);
      const auto rep = check_distance(tr, id, P, c, x0);
      CHECK(rep.pass);
      CHECK(rep.worst_residual <= 1e-9);
    }
  }
  SUBCASE("bundle query points satisfy the distance bound") {
    BuiltinParams params;
    params.extra_pieces = 8;
    const auto P = make_builtin(BuiltinKind::max_affine, 3, params, 31);
    const Vec x0 = offset(P, 1.5);
    SolverConfig c = cfg;
    c.target_eps = 1e-6;
    for (SolverId id : {SolverId::bundle_mc, SolverId::bundle_agg}) {
      const Trace tr = run_solver(id, P, c, x0);
      const auto rep = check_distance(tr, id, P, c, x0);
      CHECK(rep.pass);
    }
  }
}

TEST_CASE("equivalence checks are reproducible bit for bit") {
  BuiltinParams params;
  const auto P = make_builtin(BuiltinKind::max_affine, 3, params, 11);
  SolverConfig cfg;
  const Vec x0 = offset(P, 1.2);
  const auto a = check_equivalence_detailed(P, SolverId::bundle_mc, cfg, x0, 1e-3, 1.0);
  const auto b = check_equivalence_detailed(P, SolverId::bundle_mc, cfg, x0, 1e-3, 1.0);
  CHECK(a.report.pass == b.report.pass);
  CHECK(a.report.worst_residual == b.report.worst_residual);
  CHECK(a.measured_D == b.measured_D);
  CHECK(a.first_eps_index == b.first_eps_index);
  CHECK(a.report.note == b.report.note);
}

TEST_CASE("full bundle bound with measured constants stays below the simplified display") {
  BuiltinParams params;
  params.extra_pieces = 8;
  const auto P = make_builtin(BuiltinKind::max_affine, 2, params, 31);
  SolverConfig cfg;
  cfg.rho = 0.3;
  cfg.target_eps = 1e-8;
  cfg.max_iter = 5000;
  Vec x0(2);
  x0 << 1.1, -0.7;
  const Trace tr = bundle_multicut(P, cfg, x0);
  REQUIRE(tr.records.size() >= 2);

  // eta_0 = model(z_1) + (rho/2)||z_0 - x_1||^2, measured from the trace.
  const double model_z1 = tr.records[0].value - tr.records[1].model_gap;
  const double eta0 =
      model_z1 + 0.5 * cfg.rho * (tr.records[0].z - tr.records[1].x).squaredNorm();
  BoundParams bp;
  bp.rho = cfg.rho;
  bp.beta = cfg.beta;
  bp.L = P.lipschitz;
  bp.alpha = P.growth->coefficient;
  bp.gap0 = tr.records[0].gap;
  bp.dist0 = tr.records[0].dist;
  bp.epsilon = 1e-4;

  BoundParams full = bp;
  full.epsilon = bp.alpha_bar() * bp.epsilon;  // the stopping form at eps_stop = abar eps
  full.M = tr.measured_m;
  full.eta0 = tr.records[0].value - eta0;
  CHECK(full.M.value() <= 4.0 * bp.L * bp.L / bp.rho * (1.0 + 1e-12));
  // With a null first step eta_0 = F(x_0) - ||g_0||^2/rho, so the measured gap
  // is capped by L^2/rho (L^2/2rho only holds for the descent case).
  CHECK(full.eta0.value() <= bp.L * bp.L / bp.rho + 1e-12);
  BoundParams capped = full;
  capped.M = 4.0 * bp.L * bp.L / bp.rho;
  capped.eta0 = bp.L * bp.L / bp.rho;
  CHECK(k_bundle_full(full) <= k_bundle_full(capped) + 1e-9);
}

TEST_CASE("measured D never exceeds the a-priori distance constant") {
  SolverConfig cfg;
  cfg.target_eps = 1e-6;
  SUBCASE("prox and polyak: distances never exceed ||x0 - x*||") {
    const auto P = builtin(BuiltinKind::quadratic_norm, 2);
    const Vec x0 = offset(P, 1.0);
    for (SolverId id : {SolverId::prox, SolverId::polyak}) {
      SolverConfig c = cfg;
      c.rho = 0.5;
      const auto res = check_equivalence_detailed(P, id, c, x0, 1e-4, 2.0);
      CHECK(res.measured_D <= 1.0 + 1e-9);
    }
  }
  SUBCASE("bundle: stability-region constant") {
    BuiltinParams params;
    params.extra_pieces = 8;
    const auto P = make_builtin(BuiltinKind::max_affine, 3, params, 31);
    const Vec x0 = offset(P, 1.5);
    const auto res = check_equivalence_detailed(P, SolverId::bundle_mc, cfg, x0, 1e-4, 1.0);
    const double rhs = 2.0 * (1.0 + (1.0 - cfg.beta) / cfg.beta) *
                       (1.5 * 1.5 + P.lipschitz * P.lipschitz / (cfg.rho * cfg.rho));
    CHECK(res.measured_D * res.measured_D <= rhs + 1e-6);
  }
}
