#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "growthlift/types.hpp"

namespace growthlift {

/// Parameter record for the iteration-bound formulas. Fields default to NaN;
/// each bound validates the fields it requires. alpha_bar is always derived,
/// never stored.
struct BoundParams {
  double dist0 = std::numeric_limits<double>::quiet_NaN();  // ||x0 - x*||
  double gap0 = std::numeric_limits<double>::quiet_NaN();   // F(x0) - F*
  double rho = std::numeric_limits<double>::quiet_NaN();
  double beta = std::numeric_limits<double>::quiet_NaN();
  double L = std::numeric_limits<double>::quiet_NaN();
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double p = std::numeric_limits<double>::quiet_NaN();
  double epsilon = std::numeric_limits<double>::quiet_NaN();
  double D = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> eta0;  // stored as the gap F(x0) - eta_0
  std::optional<double> M;     // bundle null-step constant; defaults to 4 L^2 / rho

  double alpha_bar() const { return std::min(1.0, alpha / rho); }
  double null_step_constant() const { return M ? *M : 4.0 * L * L / rho; }
};

/// ln(x) clamped to 0 for x <= 1: when a gap-ratio log degenerates the target
/// is already met at k = 0.
double clamped_log(double x);

// Closed-form iteration bounds K(x0, eps, alpha). Real-valued; callers ceil
// when comparing with iteration counts.
double k_prox_quadratic(const BoundParams& P);
double k_prox_sharp(const BoundParams& P);
double k_prox_general_halving(const BoundParams& P);
double k_prox_quad_from_sharp(const BoundParams& P);
double k_subgrad_quadratic(const BoundParams& P);
double k_subgrad_sharp(const BoundParams& P);
double k_bundle_quadratic(const BoundParams& P);
double k_bundle_general(const BoundParams& P);
/// Du-Ruszczynski bundle rate in its stopping-criterion form with eta0 and M;
/// P.epsilon is read as eps_stop. Kept alongside the simplified form for
/// empirical comparison.
double k_bundle_full(const BoundParams& P);

struct RateBound {
  std::string name;
  std::function<double(const BoundParams&)> evaluate;
  std::vector<std::string> required_fields;
};

const std::vector<RateBound>& all_bounds();
const RateBound& find_bound(const std::string& name);

/// Throws ParameterError naming the first missing/invalid required field.
void require_fields(const BoundParams& P, const RateBound& bound);

/// General lifting: evaluates base with alpha := eps / D^p.
RateBound lift_general_bound(const RateBound& base, double p);

/// Higher-order lifting: evaluates base with alpha := alpha^{p/q} eps^{1-p/q}.
RateBound lift_higher_bound(const RateBound& base, double p, double q);

}  // namespace growthlift
