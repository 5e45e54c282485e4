#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>

#include "growthlift/types.hpp"

namespace growthlift {

/// Certifies F(x) >= F* + coefficient * ||x - x*||^exponent everywhere.
struct GrowthCertificate {
  double exponent = 2.0;     // p >= 1
  double coefficient = 1.0;  // alpha > 0
};

/// Radial structure F(x) = F* + phi(||x - x*||); slope is the right derivative of phi.
struct RadialProfile {
  std::function<double(double)> phi;
  std::function<double(double)> slope;
};

/// Oracle bundle plus certified metadata. Immutable after construction; all
/// oracles are pure functions, safe to evaluate concurrently.
struct ProblemInstance {
  int dim = 0;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> subgradient;
  std::function<Vec(const Vec&, double)> prox;  // empty when unavailable
  Vec x_star;
  double f_star = 0.0;
  std::optional<GrowthCertificate> growth;
  double lipschitz = 1.0;       // subgradient-norm bound over ||x - x*|| <= region_radius
  double region_radius = 10.0;
  std::optional<RadialProfile> radial;  // set for radial kinds
  std::vector<Cut> pieces;              // set for polyhedral kinds (anchored at x*)

  bool has_prox() const { return static_cast<bool>(prox); }
};

enum class BuiltinKind { sharp_norm, quadratic_norm, holder_norm, max_affine, lifted_hinge };

const char* to_string(BuiltinKind kind);
BuiltinKind parse_builtin_kind(const std::string& name);

struct BuiltinParams {
  double alpha = 1.0;       // growth coefficient (floor coefficient for lifted_hinge)
  double exponent = 2.0;    // holder_norm / lifted_hinge floor exponent
  double f_star = 0.0;
  std::optional<Vec> x_star;  // defaults to the origin
  int extra_pieces = 6;       // max_affine: random pieces beyond the 2n certified ones
  double radius = 10.0;       // region over which lipschitz is certified
};

ProblemInstance make_builtin(BuiltinKind kind, int n, const BuiltinParams& params,
                             std::uint64_t seed);

/// G(x) = max{ F(x), F* + c ||x - x*||^p } with transparent oracles; ties at
/// base = floor resolve to the base branch.
struct LiftedProblem {
  ProblemInstance base;
  double floor_coefficient = 0.0;
  double floor_exponent = 1.0;
  ProblemInstance problem;  // composed instance carrying certificate (p, c)

  double floor_value(const Eigen::Ref<const Vec>& x) const;
};

/// Floor coefficient eps / D^p.
LiftedProblem lift_general(const ProblemInstance& base, double epsilon, double D, double p);

/// Base must carry a certificate (q, alpha) with q > p; floor coefficient
/// alpha^{p/q} * eps^{1 - p/q}.
LiftedProblem lift_higher(const ProblemInstance& base, double epsilon, double p);

std::pair<double, Vec> evaluate(const ProblemInstance& problem, const Eigen::Ref<const Vec>& x);

}  // namespace growthlift
