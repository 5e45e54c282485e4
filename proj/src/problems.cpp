#include "growthlift/problems.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "growthlift/subproblem.hpp"

namespace growthlift {

namespace {

// c * r^p with exact arithmetic for the common exponents.
double power_term(double c, double p, double r) {
  if (p == 1.0) return c * r;
  if (p == 2.0) return c * r * r;
  return c * std::pow(r, p);
}

double power_slope(double c, double p, double r) {
  if (p == 1.0) return c;
  if (p == 2.0) return 2.0 * c * r;
  return c * p * std::pow(r, p - 1.0);
}

double uniform01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

void check_finite(const Vec& v, const char* field) {
  if (!v.allFinite()) throw ParameterError(std::string(field) + ": entries must be finite");
}

Vec resolve_x_star(const BuiltinParams& params, int n) {
  if (!params.x_star) return Vec::Zero(n);
  if (params.x_star->size() != n)
    throw ParameterError("params.x_star: size must equal the problem dimension");
  check_finite(*params.x_star, "params.x_star");
  return *params.x_star;
}

// Scalar prox radius: minimize psi(t) + (t - r)^2 / (2 rho) over t >= 0 for a
// convex nondecreasing psi given by its right derivative. Bisection on the
// monotone optimality condition, well past the 1e-13 contract.
double radial_prox_radius(const std::function<double(double)>& slope, double r, double rho) {
  if (r <= 0.0) return 0.0;
  auto s = [&](double t) { return slope(t) + (t - r) / rho; };
  if (s(0.0) >= 0.0) return 0.0;
  double lo = 0.0, hi = r;
  for (int i = 0; i < 200 && (hi - lo) > 1e-16 * std::max(1.0, r); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (s(mid) >= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

ProblemInstance make_radial(int n, Vec x_star, double f_star, double alpha, double p,
                            double radius) {
  ProblemInstance P;
  P.dim = n;
  P.x_star = std::move(x_star);
  P.f_star = f_star;
  P.growth = GrowthCertificate{p, alpha};
  P.region_radius = radius;
  P.lipschitz = power_slope(alpha, p, radius);
  if (p == 1.0) P.lipschitz = alpha;

  const Vec xs = P.x_star;
  auto phi = [alpha, p](double r) { return power_term(alpha, p, r); };
  auto slope = [alpha, p](double r) { return power_slope(alpha, p, r); };
  P.radial = RadialProfile{phi, slope};

  P.value = [xs, f_star, alpha, p](const Vec& x) {
    return f_star + power_term(alpha, p, (x - xs).norm());
  };
  P.subgradient = [xs, alpha, p](const Vec& x) {
    Vec d = x - xs;
    const double r = d.norm();
    if (r == 0.0) return Vec(Vec::Zero(x.size()));
    if (p == 2.0) return Vec((2.0 * alpha) * d);
    return Vec((power_slope(alpha, p, r) / r) * d);
  };
  P.prox = [xs, alpha, p](const Vec& x, double rho) {
    Vec d = x - xs;
    const double r = d.norm();
    if (r == 0.0) return Vec(xs);
    double t;
    if (p == 1.0)
      t = std::max(0.0, r - rho * alpha);
    else if (p == 2.0)
      t = r / (1.0 + 2.0 * rho * alpha);
    else
      t = radial_prox_radius([alpha, p](double u) { return power_slope(alpha, p, u); }, r, rho);
    return Vec(xs + (t / r) * d);
  };
  return P;
}

ProblemInstance make_max_affine(int n, const BuiltinParams& params, std::uint64_t seed) {
  if (params.extra_pieces < 1) throw ParameterError("params.extra_pieces: must be >= 1");
  const double alpha = params.alpha;
  ProblemInstance P;
  P.dim = n;
  P.x_star = resolve_x_star(params, n);
  P.f_star = params.f_star;
  P.region_radius = params.radius;
  const Vec xs = P.x_star;

  // Pieces are anchored at x* so F(x*) = F* holds exactly. The +/- alpha e_i
  // pairs certify sharpness: F - F* >= alpha ||x - x*||_inf >= (alpha/sqrt(n)) ||x - x*||.
  std::vector<Cut> pieces;
  pieces.reserve(2 * n + params.extra_pieces);
  for (int i = 0; i < n; ++i) {
    Vec gp = Vec::Zero(n);
    gp(i) = alpha;
    pieces.push_back({xs, params.f_star, gp});
    Vec gm = Vec::Zero(n);
    gm(i) = -alpha;
    pieces.push_back({xs, params.f_star, gm});
  }
  std::mt19937_64 rng(seed);
  for (int j = 0; j < params.extra_pieces; ++j) {
    Vec g(n);
    for (int i = 0; i < n; ++i) g(i) = alpha * (2.0 * uniform01(rng) - 1.0);
    const double offset = 0.1 + 0.9 * uniform01(rng);
    pieces.push_back({xs, params.f_star - offset, g});
  }

  double lip = 0.0;
  for (const Cut& c : pieces) lip = std::max(lip, c.g.norm());
  P.lipschitz = lip;
  P.growth = GrowthCertificate{1.0, alpha / std::sqrt(static_cast<double>(n))};
  P.pieces = pieces;

  P.value = [pieces](const Vec& x) {
    double best = pieces[0].eval(x);
    for (size_t j = 1; j < pieces.size(); ++j) best = std::max(best, pieces[j].eval(x));
    return best;
  };
  // Lowest-index active piece; the strict > scan keeps the first of any tie.
  P.subgradient = [pieces](const Vec& x) {
    size_t arg = 0;
    double best = pieces[0].eval(x);
    for (size_t j = 1; j < pieces.size(); ++j) {
      const double v = pieces[j].eval(x);
      if (v > best) {
        best = v;
        arg = j;
      }
    }
    return pieces[arg].g;
  };
  // prox_{rho,F} is the multicut subproblem with quadratic weight 1/rho; the
  // model is the function itself, so the solve is exact.
  P.prox = [pieces](const Vec& x, double rho) {
    return solve_multicut_subproblem(pieces, x, 1.0 / rho).z;
  };
  return P;
}

ProblemInstance make_lifted_hinge(int n, const BuiltinParams& params, std::uint64_t seed) {
  const double c = params.alpha;
  const double p = params.exponent;
  ProblemInstance P;
  P.dim = n;
  P.x_star = resolve_x_star(params, n);
  P.f_star = params.f_star;
  P.region_radius = params.radius;
  const Vec xs = P.x_star;
  const double fs = params.f_star;

  std::mt19937_64 rng(seed);
  Vec a(n);
  do {
    for (int i = 0; i < n; ++i) a(i) = 2.0 * uniform01(rng) - 1.0;
  } while (a.norm() < 0.3);

  P.growth = GrowthCertificate{p, c};
  P.lipschitz = std::max(a.norm(), power_slope(c, p, params.radius));

  // Branch order [zero plane, hinge plane, floor]; ties resolve to the
  // earliest branch, so the subgradient at x* is the zero vector.
  P.value = [xs, fs, a, c, p](const Vec& x) {
    Vec d = x - xs;
    double best = fs;
    best = std::max(best, fs + a.dot(d));
    best = std::max(best, fs + power_term(c, p, d.norm()));
    return best;
  };
  P.subgradient = [xs, fs, a, c, p](const Vec& x) {
    Vec d = x - xs;
    const double r = d.norm();
    double best = fs;
    int branch = 0;
    const double v1 = fs + a.dot(d);
    if (v1 > best) {
      best = v1;
      branch = 1;
    }
    const double v2 = fs + power_term(c, p, r);
    if (v2 > best) branch = 2;
    if (branch == 0) return Vec(Vec::Zero(x.size()));
    if (branch == 1) return a;
    return Vec((power_slope(c, p, r) / r) * d);  // r > 0 when the floor wins strictly
  };
  return P;
}

Vec lifted_polyhedral_prox(const std::vector<Cut>& pieces, const Vec& xs, double fs, double c,
                           double p, const std::function<double(const Vec&)>& lifted_value,
                           const Vec& xc, double rho) {
  const double w = 1.0 / rho;
  std::vector<Cut> cuts = pieces;
  auto floor_cut_at = [&](const Vec& y) {
    Vec d = y - xs;
    const double r = d.norm();
    Vec grad = Vec::Zero(y.size());
    if (r > 0.0) grad = (power_slope(c, p, r) / r) * d;
    return Cut{y, fs + power_term(c, p, r), grad};
  };
  cuts.push_back(floor_cut_at(xc));
  double gap = 0.0;
  for (int it = 0; it < 200; ++it) {
    const SubproblemSolution sol = solve_multicut_subproblem(cuts, xc, w);
    const double gv = lifted_value(sol.z);
    gap = gv - sol.model_value;
    if (gap <= 1e-13 * std::max(1.0, std::abs(gv))) return sol.z;
    cuts.push_back(floor_cut_at(sol.z));
  }
  throw NumericalError("lifted prox: cutting-plane refinement did not converge", gap);
}

LiftedProblem make_lifted(const ProblemInstance& base, double c, double p) {
  LiftedProblem L;
  L.base = base;
  L.floor_coefficient = c;
  L.floor_exponent = p;

  ProblemInstance G = base;
  const Vec xs = base.x_star;
  const double fs = base.f_star;
  const auto base_value = base.value;
  const auto base_subgrad = base.subgradient;

  G.value = [base_value, xs, fs, c, p](const Vec& x) {
    const double fb = base_value(x);
    const double fl = fs + power_term(c, p, (x - xs).norm());
    return fb >= fl ? fb : fl;
  };
  G.subgradient = [base_value, base_subgrad, xs, fs, c, p](const Vec& x) {
    const double fb = base_value(x);
    Vec d = x - xs;
    const double r = d.norm();
    const double fl = fs + power_term(c, p, r);
    if (fb >= fl) return base_subgrad(x);
    return Vec((power_slope(c, p, r) / r) * d);  // fl > fb >= fs forces r > 0
  };
  G.growth = GrowthCertificate{p, c};
  G.lipschitz =
      std::max(base.lipschitz, p == 1.0 ? c : power_slope(c, p, base.region_radius));
  G.pieces.clear();
  G.radial.reset();
  G.prox = nullptr;

  if (base.radial) {
    const auto bphi = base.radial->phi;
    const auto bslope = base.radial->slope;
    auto psi = [bphi, c, p](double r) { return std::max(bphi(r), power_term(c, p, r)); };
    auto psi_slope = [bphi, bslope, c, p](double r) {
      const double vb = bphi(r);
      const double vf = power_term(c, p, r);
      if (vb > vf) return bslope(r);
      if (vf > vb) return power_slope(c, p, r);
      return std::max(bslope(r), power_slope(c, p, r));
    };
    G.radial = RadialProfile{psi, psi_slope};
    G.prox = [xs, psi_slope](const Vec& x, double rho) {
      Vec d = x - xs;
      const double r = d.norm();
      if (r == 0.0) return Vec(xs);
      const double t = radial_prox_radius(psi_slope, r, rho);
      return Vec(xs + (t / r) * d);
    };
  } else if (!base.pieces.empty()) {
    const auto pieces = base.pieces;
    const auto gval = G.value;
    G.prox = [pieces, xs, fs, c, p, gval](const Vec& x, double rho) {
      return lifted_polyhedral_prox(pieces, xs, fs, c, p, gval, x, rho);
    };
  }

  L.problem = G;
  return L;
}

}  // namespace

const char* to_string(BuiltinKind kind) {
  switch (kind) {
    case BuiltinKind::sharp_norm: return "sharp_norm";
    case BuiltinKind::quadratic_norm: return "quadratic_norm";
    case BuiltinKind::holder_norm: return "holder_norm";
    case BuiltinKind::max_affine: return "max_affine";
    case BuiltinKind::lifted_hinge: return "lifted_hinge";
  }
  return "?";
}

BuiltinKind parse_builtin_kind(const std::string& name) {
  if (name == "sharp_norm") return BuiltinKind::sharp_norm;
  if (name == "quadratic_norm") return BuiltinKind::quadratic_norm;
  if (name == "holder_norm") return BuiltinKind::holder_norm;
  if (name == "max_affine") return BuiltinKind::max_affine;
  if (name == "lifted_hinge") return BuiltinKind::lifted_hinge;
  throw ParameterError("kind: unknown builtin '" + name + "'");
}

ProblemInstance make_builtin(BuiltinKind kind, int n, const BuiltinParams& params,
                             std::uint64_t seed) {
  if (n < 1) throw ParameterError("n: dimension must be >= 1");
  if (!(params.alpha > 0.0)) throw ParameterError("params.alpha: must be positive");
  if (!(params.radius > 0.0)) throw ParameterError("params.radius: must be positive");
  if (!std::isfinite(params.f_star)) throw ParameterError("params.f_star: must be finite");

  switch (kind) {
    case BuiltinKind::sharp_norm:
      return make_radial(n, resolve_x_star(params, n), params.f_star, params.alpha, 1.0,
                         params.radius);
    case BuiltinKind::quadratic_norm:
      return make_radial(n, resolve_x_star(params, n), params.f_star, params.alpha, 2.0,
                         params.radius);
    case BuiltinKind::holder_norm:
      if (!(params.exponent >= 1.0)) throw ParameterError("params.exponent: must be >= 1");
      return make_radial(n, resolve_x_star(params, n), params.f_star, params.alpha,
                         params.exponent, params.radius);
    case BuiltinKind::max_affine:
      return make_max_affine(n, params, seed);
    case BuiltinKind::lifted_hinge:
      if (!(params.exponent >= 1.0)) throw ParameterError("params.exponent: must be >= 1");
      return make_lifted_hinge(n, params, seed);
  }
  throw ParameterError("kind: unknown builtin");
}

double LiftedProblem::floor_value(const Eigen::Ref<const Vec>& x) const {
  return base.f_star + power_term(floor_coefficient, floor_exponent, (x - base.x_star).norm());
}

LiftedProblem lift_general(const ProblemInstance& base, double epsilon, double D, double p) {
  if (!(epsilon > 0.0)) throw ParameterError("epsilon: must be positive");
  if (!(D > 0.0)) throw ParameterError("D: must be positive");
  if (!(p >= 1.0)) throw ParameterError("p: must be >= 1");
  return make_lifted(base, epsilon / std::pow(D, p), p);
}

LiftedProblem lift_higher(const ProblemInstance& base, double epsilon, double p) {
  if (!base.growth) throw StateError("base: growth certificate required for lift_higher");
  if (!(epsilon > 0.0)) throw ParameterError("epsilon: must be positive");
  if (!(p >= 1.0)) throw ParameterError("p: must be >= 1");
  const double q = base.growth->exponent;
  const double alpha = base.growth->coefficient;
  if (!(p < q)) throw ParameterError("p: must be strictly below the certificate exponent q");
  const double c = std::pow(alpha, p / q) * std::pow(epsilon, 1.0 - p / q);
  return make_lifted(base, c, p);
}

std::pair<double, Vec> evaluate(const ProblemInstance& problem, const Eigen::Ref<const Vec>& x) {
  if (x.size() != problem.dim) throw ParameterError("x: dimension mismatch with problem");
  const Vec xv = x;
  check_finite(xv, "x");
  return {problem.value(xv), problem.subgradient(xv)};
}

}  // namespace growthlift
