#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "growthlift/cli.hpp"
#include "growthlift/io.hpp"
#include "growthlift/solvers.hpp"

using namespace growthlift;
namespace fs = std::filesystem;

namespace {

struct CoutCapture {
  std::ostringstream ss;
  std::streambuf* old;
  CoutCapture() : old(std::cout.rdbuf(ss.rdbuf())) {}
  ~CoutCapture() { std::cout.rdbuf(old); }
  std::string str() const { return ss.str(); }
};

fs::path tmpdir() {
  const fs::path p = fs::temp_directory_path() / "growthlift_tests";
  fs::create_directories(p);
  return p;
}

fs::path write_file(const std::string& name, const std::string& content) {
  const fs::path p = tmpdir() / name;
  std::ofstream out(p, std::ios::binary);
  out << content;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int data_lines(const std::string& csv) {
  int n = -1;  // skip the header
  for (char c : csv)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("format_double is shortest round-trip") {
  for (double v : {0.1, 1.0 / 3.0, 2.0, 1e-300, -7.25, 0.0, 1234567.875}) {
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_double(20.0) == "20");
}

TEST_CASE("problem specs round-trip byte-identically through the canonical form") {
  const std::string text =
      R"({"kind":"max_affine","n":2,"params":{"alpha":1.0,"exponent":2.0,"f_star":0.0,)"
      R"("x_star":[0.5,-0.25],"extra_pieces":6,"radius":10.0},"seed":7})";
  const ProblemSpec spec = parse_problem_spec(text);
  const std::string canon = to_canonical_json(spec);
  CHECK(to_canonical_json(parse_problem_spec(canon)) == canon);
  CHECK(parse_problem_spec(canon).seed == 7);
  CHECK(parse_problem_spec(canon).params.x_star->size() == 2);

  // minimal spec resolves defaults
  const ProblemSpec minimal = parse_problem_spec(R"({"kind":"sharp_norm","n":1})");
  CHECK(minimal.params.alpha == 1.0);
  const std::string canon2 = to_canonical_json(minimal);
  CHECK(to_canonical_json(parse_problem_spec(canon2)) == canon2);
}

TEST_CASE("problem spec parse errors name the offending field") {
  CHECK_THROWS_WITH_AS((void)parse_problem_spec(R"({"kind":"sharp_norm"})"),
                       "n: required integer field", ParameterError);
  CHECK_THROWS_WITH_AS((void)parse_problem_spec(R"({"kind":"warp_norm","n":1})"),
                       "kind: unknown builtin 'warp_norm'", ParameterError);
  CHECK_THROWS_AS((void)parse_problem_spec(R"({"kind":"sharp_norm","n":1,"frobs":2})"),
                  ParameterError);
  CHECK_THROWS_AS(
      (void)parse_problem_spec(R"({"kind":"sharp_norm","n":1,"params":{"weird":1}})"),
      ParameterError);
  CHECK_THROWS_AS((void)parse_problem_spec("not json"), ParameterError);
}

TEST_CASE("bound params parse strictly") {
  const BoundParams P = parse_bound_params(R"({"gap0":1.0,"rho":0.1,"alpha":1.0})");
  CHECK(P.gap0 == 1.0);
  CHECK(std::isnan(P.L));
  CHECK_THROWS_AS((void)parse_bound_params(R"({"gap_zero":1.0})"), ParameterError);
}

TEST_CASE("trace CSV has the exact column schema") {
  BuiltinParams params;
  const auto P = make_builtin(BuiltinKind::sharp_norm, 1, params, 0);
  SolverConfig cfg;
  cfg.rho = 0.1;
  cfg.target_eps = 1e-6;
  const Trace tr = proximal_point(P, cfg, Vec::Ones(1));
  std::ostringstream ss;
  write_trace_csv(ss, tr);
  const std::string csv = ss.str();
  CHECK(csv.rfind("k,step_kind,value,gap,dist,stepsize,model_gap\n", 0) == 0);
  CHECK(data_lines(csv) == 11);
  // non-bundle rows leave model_gap empty
  const auto first_row = csv.substr(csv.find('\n') + 1);
  const auto line = first_row.substr(0, first_row.find('\n'));
  CHECK(line == "0,init,1,1,1,0,");

  const Trace bt = bundle_multicut(P, cfg, Vec::Ones(1));
  std::ostringstream bs;
  write_trace_csv(bs, bt);
  const std::string bcsv = bs.str();
  const auto last = bcsv.rfind('\n', bcsv.size() - 2);
  CHECK(bcsv.substr(last + 1).back() != ',');  // bundle rows carry a model gap
}

TEST_CASE("parse_vec accepts comma-separated doubles only") {
  const Vec v = parse_vec("1,0.5,-2e-3");
  CHECK(v.size() == 3);
  CHECK(v(2) == -2e-3);
  CHECK_THROWS_AS((void)parse_vec("1,abc"), ParameterError);
  CHECK_THROWS_AS((void)parse_vec(""), ParameterError);
}

TEST_CASE("cli solve writes the trace and reports termination") {
  const auto spec = write_file("sharp1.json", R"({"kind":"sharp_norm","n":1})");
  const auto out = tmpdir() / "trace.csv";

  SUBCASE("prox run reaches the minimizer") {
    CoutCapture cap;
    const int rc = cli_main({"solve", "--problem", spec.string(), "--method", "prox", "--rho",
                             "0.1", "--eps", "1e-6", "--x0", "1", "--out", out.string()});
    CHECK(rc == 0);
    CHECK(data_lines(slurp(out)) == 11);
    CHECK(cap.str().find("termination=eps_reached") != std::string::npos);
  }
  SUBCASE("missing rho for prox is a usage error") {
    CoutCapture cap;
    const int rc = cli_main({"solve", "--problem", spec.string(), "--method", "prox", "--x0",
                             "1", "--out", out.string()});
    CHECK(rc == 1);
  }
  SUBCASE("eps above the initial gap yields a single row") {
    CoutCapture cap;
    const int rc = cli_main({"solve", "--problem", spec.string(), "--method", "polyak",
                             "--eps", "5", "--x0", "1", "--out", out.string()});
    CHECK(rc == 0);
    CHECK(data_lines(slurp(out)) == 1);
  }
  SUBCASE("iteration budget exhaustion exits 2") {
    const auto quad = write_file("quad1.json", R"({"kind":"quadratic_norm","n":1})");
    CoutCapture cap;
    const int rc = cli_main({"solve", "--problem", quad.string(), "--method", "polyak",
                             "--eps", "1e-300", "--max-iter", "5", "--x0", "1", "--out",
                             out.string()});
    CHECK(rc == 2);
  }
  SUBCASE("--report writes the invariant-check JSON") {
    const auto rep = tmpdir() / "report.json";
    CoutCapture cap;
    const int rc = cli_main({"solve", "--problem", spec.string(), "--method", "prox", "--rho",
                             "0.1", "--eps", "1e-6", "--x0", "1", "--out", out.string(),
                             "--report", rep.string()});
    CHECK(rc == 0);
    const std::string json = slurp(rep);
    CHECK(json.find("\"check\":\"distance\"") != std::string::npos);
    CHECK(json.find("\"pass\":true") != std::string::npos);
    CHECK(json.find("false") == std::string::npos);
  }
}

TEST_CASE("cli bounds evaluates and lifts named bounds") {
  const auto params = write_file(
      "bp.json", R"({"gap0":1.0,"rho":0.1,"alpha":1.0,"D":1.0,"epsilon":0.1})");
  SUBCASE("base value") {
    CoutCapture cap;
    const int rc =
        cli_main({"bounds", "--name", "k_prox_sharp", "--params", params.string()});
    CHECK(rc == 0);
    CHECK(cap.str() == "20\n");
  }
  SUBCASE("general lifting prints the transformed value too") {
    CoutCapture cap;
    const int rc = cli_main({"bounds", "--name", "k_prox_sharp", "--params", params.string(),
                             "--lift", "general:1"});
    CHECK(rc == 0);
    const std::string out = cap.str();
    REQUIRE(out.rfind("20\n", 0) == 0);
    const double lifted = std::strtod(out.c_str() + 3, nullptr);
    CHECK(lifted == doctest::Approx(2000.0).epsilon(1e-12));
  }
  SUBCASE("unknown bound name") {
    CoutCapture cap;
    const int rc = cli_main({"bounds", "--name", "k_nonsense", "--params", params.string()});
    CHECK(rc == 1);
  }
  SUBCASE("missing required field names it") {
    const auto incomplete = write_file("bp2.json", R"({"gap0":1.0,"rho":0.1})");
    CoutCapture cap;
    const int rc =
        cli_main({"bounds", "--name", "k_prox_sharp", "--params", incomplete.string()});
    CHECK(rc == 1);
  }
}

TEST_CASE("cli lift-check") {
  const auto spec = write_file("maxa.json", R"({"kind":"max_affine","n":2,"seed":7})");
  SUBCASE("passes and prints the measured D") {
    CoutCapture cap;
    const int rc = cli_main({"lift-check", "--problem", spec.string(), "--method", "polyak",
                             "--eps", "1e-3", "--p", "1"});
    CHECK(rc == 0);
    CHECK(cap.str().find("PASS D=") != std::string::npos);
  }
  SUBCASE("p >= q is rejected") {
    CoutCapture cap;
    const int rc = cli_main({"lift-check", "--problem", spec.string(), "--method", "polyak",
                             "--eps", "1e-3", "--p", "2", "--q", "1"});
    CHECK(rc == 1);
  }
  SUBCASE("higher-order lifting against the certificate exponent") {
    const auto quad = write_file("quad2.json", R"({"kind":"quadratic_norm","n":2})");
    CoutCapture cap;
    const int rc = cli_main({"lift-check", "--problem", quad.string(), "--method", "polyak",
                             "--eps", "1e-2", "--p", "1", "--q", "2"});
    CHECK(rc == 0);
    CHECK(cap.str().find("PASS") != std::string::npos);
  }
}

TEST_CASE("cli bench prints an observed-vs-bound table") {
  const auto spec = write_file("sharp3.json", R"({"kind":"sharp_norm","n":3})");
  CoutCapture cap;
  const int rc = cli_main({"bench", "--problem", spec.string(), "--method", "polyak",
                           "--bound", "k_subgrad_sharp", "--eps-list", "1e-2,1e-4"});
  CHECK(rc == 0);
  CHECK(cap.str().rfind("eps,k_observed,bound,ok\n", 0) == 0);
  CHECK(cap.str().find(",yes") != std::string::npos);
}

TEST_CASE("cli validate runs single criteria and is byte-deterministic") {
  CoutCapture cap1;
  const int rc1 = cli_main({"validate", "--only", "c01"});
  const std::string out1 = cap1.str();
  CHECK(rc1 == 0);
  CHECK(out1.find("\"all_pass\": true") != std::string::npos);
  CHECK(out1.find("\"id\": \"c01\"") != std::string::npos);

  CoutCapture cap2;
  const int rc2 = cli_main({"validate", "--only", "c01"});
  CHECK(rc2 == 0);
  CHECK(cap2.str() == out1);

  CoutCapture cap3;
  CHECK(cli_main({"validate", "--only", "c99"}) == 1);
}

TEST_CASE("cli rejects unknown flags and subcommands") {
  CoutCapture cap;
  CHECK(cli_main({"solve", "--bogus", "1"}) == 1);
  CHECK(cli_main({"frobnicate"}) == 1);
}

TEST_CASE("GROWTHLIFT_SEED overrides the default seed") {
  CHECK(default_seed() == 0);
  setenv("GROWTHLIFT_SEED", "42", 1);
  CHECK(default_seed() == 42);
  const ProblemSpec spec = parse_problem_spec(R"({"kind":"max_affine","n":2})");
  CHECK(spec.seed == 42);
  setenv("GROWTHLIFT_SEED", "nope", 1);
  CHECK_THROWS_AS((void)default_seed(), ParameterError);
  unsetenv("GROWTHLIFT_SEED");
  CHECK(default_seed() == 0);
}
