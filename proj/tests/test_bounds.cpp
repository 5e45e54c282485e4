#include <doctest.h>

#include <cmath>
#include <random>

#include "growthlift/bounds.hpp"

using namespace growthlift;

namespace {

double u01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }
double logu(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * u01(rng));
}

BoundParams random_params(std::mt19937_64& rng) {
  BoundParams P;
  P.rho = logu(rng, 0.1, 10.0);
  P.beta = 0.1 + 0.8 * u01(rng);
  P.alpha = logu(rng, 0.2, 5.0);
  P.L = logu(rng, 0.5, 20.0);
  P.dist0 = logu(rng, 0.3, 8.0);
  P.gap0 = logu(rng, 0.1, 50.0);
  P.epsilon = logu(rng, 1e-6, P.gap0 / 2.0);
  P.D = P.dist0;
  return P;
}

}  // namespace

TEST_CASE("prox bounds evaluate their closed forms") {
  BoundParams P;
  P.alpha = 2.0;
  P.rho = 1.0;
  P.gap0 = 1.0;
  P.epsilon = 1e-3;
  CHECK(k_prox_quadratic(P) == doctest::Approx(std::log(1000.0) / std::log(2.0)).epsilon(1e-12));
  P.epsilon = P.gap0;
  CHECK(k_prox_quadratic(P) == 0.0);

  BoundParams S;
  S.gap0 = 1.0;
  S.rho = 0.1;
  S.alpha = 1.0;
  CHECK(k_prox_sharp(S) == doctest::Approx(20.0));
  S.gap0 = 0.0;
  CHECK(k_prox_sharp(S) == 0.0);

  BoundParams H;
  H.dist0 = 1.0;
  H.rho = 1.0;
  H.epsilon = 0.1;
  CHECK(k_prox_general_halving(H) == doctest::Approx(160.0));

  BoundParams Q;
  Q.rho = 2.0;
  Q.alpha = 0.5;
  Q.gap0 = 8.0;
  Q.epsilon = 1.0;
  CHECK(k_prox_quad_from_sharp(Q) == doctest::Approx(4.0 * std::log(8.0)));
}

TEST_CASE("halving-schedule sum stays below the closed form") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 50; ++i) {
    const BoundParams P = random_params(rng);
    // Each halving stage starting at gap g costs 8 D^2/(rho g) iterations;
    // stages run until the gap is at most eps.
    double acc = 0.0;
    double g = P.gap0;
    while (g > P.epsilon) {
      acc += 1.0 / g;
      g /= 2.0;
    }
    const double summed = 8.0 * P.dist0 * P.dist0 / P.rho * acc;
    CHECK(summed <= k_prox_general_halving(P) * (1.0 + 1e-12));
  }
}

TEST_CASE("subgradient bounds evaluate their closed forms") {
  BoundParams P;
  P.L = 1.0;
  P.alpha = 1.0;
  P.dist0 = 1.0;
  P.epsilon = 1e-3;
  CHECK(k_subgrad_quadratic(P) == doctest::Approx(2000.0 * std::log(1000.0)).epsilon(1e-12));
  CHECK(k_subgrad_sharp(P) == doctest::Approx(2.0 * std::log(1000.0)).epsilon(1e-12));
  P.epsilon = 1.0;  // log argument collapses to 1 and clamps
  CHECK(k_subgrad_quadratic(P) == 0.0);
  CHECK(k_subgrad_sharp(P) == 0.0);
}

TEST_CASE("alpha_bar is derived, never stored") {
  BoundParams P;
  P.alpha = 3.0;
  P.rho = 2.0;
  CHECK(P.alpha_bar() == 1.0);
  P.alpha = 1.0;
  CHECK(P.alpha_bar() == 0.5);
}

TEST_CASE("bundle bound cross-checked against a second expression tree") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 100; ++i) {
    const BoundParams P = random_params(rng);
    const double ab = std::min(1.0, P.alpha / P.rho);
    const double es = ab * P.epsilon;
    const double L2 = P.L * P.L;
    const double omb2 = (1.0 - P.beta) * (1.0 - P.beta);
    const double log1 = clamped_log(L2 / (2.0 * P.rho * es));
    const double log2 = clamped_log(P.gap0 / (P.beta * es));
    const double log3 = std::log(9.0 / (2.0 * ab * ab * P.beta * P.beta));
    const double expect = 8.0 * L2 / (P.rho * omb2 * es) * log1 +
                          log2 * (8.0 * L2 / (P.rho * omb2 * P.beta * ab * es) * log3 +
                                  2.0 / (ab * P.beta)) +
                          2.0;
    CHECK(k_bundle_quadratic(P) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("bundle bound diverges as beta approaches one") {
  BoundParams P;
  P.L = 1.0;
  P.rho = 1.0;
  P.alpha = 1.0;
  P.gap0 = 1.0;
  P.epsilon = 1e-2;
  P.beta = 1.0 - 1e-9;
  CHECK(k_bundle_quadratic(P) > 1e12);
}

TEST_CASE("k_bundle_general substitutes alpha = eps/D^2") {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 50; ++i) {
    BoundParams P = random_params(rng);
    BoundParams Q = P;
    Q.alpha = P.epsilon / (P.D * P.D);
    CHECK(k_bundle_general(P) == doctest::Approx(k_bundle_quadratic(Q)).epsilon(1e-14));
  }
}

TEST_CASE("full Du-Ruszczynski form never exceeds the simplified display") {
  std::mt19937_64 rng(44);
  for (int i = 0; i < 100; ++i) {
    BoundParams P = random_params(rng);
    const double ab = P.alpha_bar();
    BoundParams F = P;
    F.epsilon = ab * P.epsilon;  // evaluate the stopping form at eps_stop = abar * eps
    CHECK(k_bundle_full(F) <= k_bundle_quadratic(P) * (1.0 + 1e-12) + 1e-9);
  }
}

TEST_CASE("bounds are monotone nonincreasing in epsilon and alpha") {
  std::mt19937_64 rng(55);
  const char* names[] = {"k_prox_quadratic", "k_prox_sharp",      "k_prox_general_halving",
                         "k_prox_quad_from_sharp", "k_subgrad_quadratic", "k_subgrad_sharp",
                         "k_bundle_quadratic"};
  for (const char* name : names) {
    const RateBound& b = find_bound(name);
    for (int i = 0; i < 40; ++i) {
      BoundParams P = random_params(rng);
      BoundParams bigger_eps = P;
      bigger_eps.epsilon = P.epsilon * (1.0 + u01(rng));
      CHECK(b.evaluate(bigger_eps) <= b.evaluate(P) * (1.0 + 1e-12) + 1e-9);
      BoundParams bigger_alpha = P;
      bigger_alpha.alpha = P.alpha * (1.0 + u01(rng));
      CHECK(b.evaluate(bigger_alpha) <= b.evaluate(P) * (1.0 + 1e-12) + 1e-9);
    }
  }
}

TEST_CASE("registry lookup and required-field validation") {
  CHECK_THROWS_AS((void)find_bound("k_unknown"), ParameterError);
  const RateBound& b = find_bound("k_subgrad_sharp");
  BoundParams P;
  P.alpha = 1.0;
  P.epsilon = 0.1;
  P.dist0 = 1.0;  // L missing
  CHECK_THROWS_WITH_AS((void)require_fields(P, b), "L: required by k_subgrad_sharp but missing",
                       ParameterError);
  P.L = -1.0;
  CHECK_THROWS_AS((void)require_fields(P, b), ParameterError);
  P.L = 1.0;
  CHECK_NOTHROW(require_fields(P, b));
}

TEST_CASE("lifting transforms rewrite alpha") {
  const RateBound& sharp = find_bound("k_prox_sharp");
  SUBCASE("general lifting reproduces the D-based display") {
    const RateBound lifted = lift_general_bound(sharp, 1.0);
    BoundParams P;
    P.gap0 = 2.0;
    P.rho = 0.5;
    P.epsilon = 0.1;
    P.D = 3.0;
    CHECK(lifted.evaluate(P) ==
          doctest::Approx(2.0 * P.gap0 * P.D * P.D / (P.rho * P.epsilon * P.epsilon))
              .epsilon(1e-12));
    CHECK(lifted.name == "k_prox_sharp|general:1");
  }
  SUBCASE("higher lifting approaches the base as p -> q") {
    const double q = 2.0;
    const RateBound lifted = lift_higher_bound(sharp, q - 1e-9, q);
    BoundParams P;
    P.gap0 = 1.0;
    P.rho = 1.0;
    P.alpha = 0.7;
    P.epsilon = 1e-3;
    CHECK(lifted.evaluate(P) == doctest::Approx(sharp.evaluate(P)).epsilon(1e-6));
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS((void)lift_general_bound(sharp, 0.5), ParameterError);
    CHECK_THROWS_AS((void)lift_higher_bound(sharp, 2.0, 2.0), ParameterError);
  }
  SUBCASE("constant bounds are unchanged by lifting") {
    RateBound constant{"const", [](const BoundParams&) { return 7.0; }, {}};
    const RateBound lifted = lift_general_bound(constant, 2.0);
    BoundParams P;
    P.epsilon = 0.1;
    P.D = 2.0;
    CHECK(lifted.evaluate(P) == 7.0);
  }
}

TEST_CASE("lifting substitution identities hold pointwise") {
  std::mt19937_64 rng(66);
  const RateBound g_prox_quad = lift_general_bound(find_bound("k_prox_quadratic"), 2.0);
  const RateBound h_prox_sharp = lift_higher_bound(find_bound("k_prox_sharp"), 1.0, 2.0);
  const RateBound g_sub_sharp = lift_general_bound(find_bound("k_subgrad_sharp"), 1.0);
  const RateBound h_sub_sharp = lift_higher_bound(find_bound("k_subgrad_sharp"), 1.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const BoundParams P = random_params(rng);
    const double d2 = P.dist0 * P.dist0;
    const double log_ld = clamped_log(P.L * P.dist0 / P.epsilon);
    CHECK(g_prox_quad.evaluate(P) ==
          doctest::Approx(std::log(P.gap0 / P.epsilon) /
                          std::log1p(P.rho * P.epsilon / (2.0 * d2)))
              .epsilon(1e-12));
    CHECK(h_prox_sharp.evaluate(P) ==
          doctest::Approx(2.0 * P.gap0 / (P.rho * P.alpha * P.epsilon)).epsilon(1e-12));
    CHECK(g_sub_sharp.evaluate(P) ==
          doctest::Approx(2.0 * P.L * P.L * d2 / (P.epsilon * P.epsilon) * log_ld)
              .epsilon(1e-12));
    CHECK(h_sub_sharp.evaluate(P) ==
          doctest::Approx(2.0 * P.L * P.L / (P.alpha * P.epsilon) * log_ld).epsilon(1e-12));
  }
}
