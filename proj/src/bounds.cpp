#include "growthlift/bounds.hpp"

#include <cmath>

#include "growthlift/io.hpp"

namespace growthlift {

double clamped_log(double x) { return x > 1.0 ? std::log(x) : 0.0; }

double k_prox_quadratic(const BoundParams& P) {
  if (P.gap0 <= P.epsilon) return 0.0;
  return std::log(P.gap0 / P.epsilon) / std::log1p(P.alpha * P.rho / 2.0);
}

double k_prox_sharp(const BoundParams& P) { return 2.0 * P.gap0 / (P.rho * P.alpha * P.alpha); }

double k_prox_general_halving(const BoundParams& P) {
  return 16.0 * P.dist0 * P.dist0 / (P.rho * P.epsilon);
}

double k_prox_quad_from_sharp(const BoundParams& P) {
  return (4.0 / (P.rho * P.alpha)) * clamped_log(P.gap0 / P.epsilon);
}

double k_subgrad_quadratic(const BoundParams& P) {
  return (2.0 * P.L * P.L / (P.alpha * P.epsilon)) * clamped_log(P.L * P.dist0 / P.epsilon);
}

double k_subgrad_sharp(const BoundParams& P) {
  return (2.0 * P.L * P.L / (P.alpha * P.alpha)) * clamped_log(P.L * P.dist0 / P.epsilon);
}

double k_bundle_quadratic(const BoundParams& P) {
  const double ab = P.alpha_bar();
  const double es = ab * P.epsilon;  // eps_stop at which the method would have terminated
  const double omb = 1.0 - P.beta;
  const double t1 =
      (8.0 * P.L * P.L / (P.rho * omb * omb * es)) * clamped_log(P.L * P.L / (2.0 * P.rho * es));
  const double t2 =
      clamped_log(P.gap0 / (P.beta * es)) *
      ((8.0 * P.L * P.L / (P.rho * omb * omb * P.beta * ab * es)) *
           clamped_log(9.0 / (2.0 * ab * ab * P.beta * P.beta)) +
       2.0 / (ab * P.beta));
  return t1 + t2 + 2.0;
}

double k_bundle_general(const BoundParams& P) {
  BoundParams Q = P;
  Q.alpha = P.epsilon / (P.D * P.D);
  return k_bundle_quadratic(Q);
}

double k_bundle_full(const BoundParams& P) {
  const double ab = P.alpha_bar();
  const double es = P.epsilon;  // read as eps_stop
  const double omb = 1.0 - P.beta;
  const double M = P.null_step_constant();
  const double gap_eta = P.eta0 ? *P.eta0 : P.L * P.L / (2.0 * P.rho);  // F(x0) - eta_0
  const double t1 = (2.0 * M / (omb * omb * es)) * clamped_log(gap_eta / es);
  // ln(1 - ab beta) and ln(2 ab^2 beta^2 / 9) are both negative; their ratio
  // structure makes the middle term nonnegative, so neither log is clamped.
  const double mid = clamped_log(P.gap0 / (P.beta * es)) / std::log(1.0 - ab * P.beta);
  const double inner =
      (2.0 * M / (omb * omb * es)) * std::log(2.0 * ab * ab * P.beta * P.beta / 9.0) - 2.0;
  return t1 + mid * inner + 2.0;
}

const std::vector<RateBound>& all_bounds() {
  static const std::vector<RateBound> table = {
      {"k_prox_quadratic", k_prox_quadratic, {"gap0", "epsilon", "alpha", "rho"}},
      {"k_prox_sharp", k_prox_sharp, {"gap0", "rho", "alpha"}},
      {"k_prox_general_halving", k_prox_general_halving, {"dist0", "rho", "epsilon"}},
      {"k_prox_quad_from_sharp", k_prox_quad_from_sharp, {"gap0", "rho", "alpha", "epsilon"}},
      {"k_subgrad_quadratic", k_subgrad_quadratic, {"L", "alpha", "epsilon", "dist0"}},
      {"k_subgrad_sharp", k_subgrad_sharp, {"L", "alpha", "epsilon", "dist0"}},
      {"k_bundle_quadratic", k_bundle_quadratic,
       {"L", "rho", "beta", "alpha", "epsilon", "gap0"}},
      {"k_bundle_general", k_bundle_general, {"L", "rho", "beta", "epsilon", "gap0", "D"}},
      {"k_bundle_full", k_bundle_full, {"L", "rho", "beta", "alpha", "epsilon", "gap0"}},
  };
  return table;
}

const RateBound& find_bound(const std::string& name) {
  for (const RateBound& b : all_bounds())
    if (b.name == name) return b;
  throw ParameterError("name: unknown bound '" + name + "'");
}

namespace {

double field_value(const BoundParams& P, const std::string& field) {
  if (field == "dist0") return P.dist0;
  if (field == "gap0") return P.gap0;
  if (field == "rho") return P.rho;
  if (field == "beta") return P.beta;
  if (field == "L") return P.L;
  if (field == "alpha") return P.alpha;
  if (field == "p") return P.p;
  if (field == "epsilon") return P.epsilon;
  if (field == "D") return P.D;
  throw ParameterError("field: unknown bound parameter '" + field + "'");
}

}  // namespace

void require_fields(const BoundParams& P, const RateBound& bound) {
  for (const std::string& f : bound.required_fields) {
    const double v = field_value(P, f);
    if (std::isnan(v)) throw ParameterError(f + ": required by " + bound.name + " but missing");
    if ((f == "rho" || f == "L" || f == "alpha" || f == "epsilon" || f == "D") && !(v > 0.0))
      throw ParameterError(f + ": must be positive");
    if (f == "beta" && !(v > 0.0 && v < 1.0)) throw ParameterError("beta: must lie in (0,1)");
    if ((f == "gap0" || f == "dist0") && !(v >= 0.0))
      throw ParameterError(f + ": must be >= 0");
  }
}

RateBound lift_general_bound(const RateBound& base, double p) {
  if (!(p >= 1.0)) throw ParameterError("p: must be >= 1");
  RateBound out;
  out.name = base.name + "|general:" + format_double(p);
  out.required_fields = {"epsilon", "D"};
  for (const std::string& f : base.required_fields)
    if (f != "alpha") out.required_fields.push_back(f);
  auto eval = base.evaluate;
  out.evaluate = [eval, p](const BoundParams& P) {
    BoundParams Q = P;
    Q.alpha = P.epsilon / std::pow(P.D, p);
    return eval(Q);
  };
  return out;
}

RateBound lift_higher_bound(const RateBound& base, double p, double q) {
  if (!(p >= 1.0)) throw ParameterError("p: must be >= 1");
  if (!(q > p)) throw ParameterError("q: must be strictly greater than p");
  RateBound out;
  out.name = base.name + "|higher:" + format_double(p) + "," + format_double(q);
  out.required_fields = base.required_fields;
  out.required_fields.push_back("epsilon");
  auto eval = base.evaluate;
  out.evaluate = [eval, p, q](const BoundParams& P) {
    BoundParams Q = P;
    Q.alpha = std::pow(P.alpha, p / q) * std::pow(P.epsilon, 1.0 - p / q);
    return eval(Q);
  };
  return out;
}

}  // namespace growthlift
