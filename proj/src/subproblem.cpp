#include "growthlift/subproblem.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace growthlift {

namespace {

// Restricted KKT system on the working set W:
//   (1/rho) Q_W y + mu 1 = d_W,  1^T y = 1.
// Kernel vectors [v; nu] satisfy nu = 0, G v = 0 and 1^T v = 0, so the dual is
// linear along v with slope d^T v: a nonzero slope is an improving ray of an
// inconsistent system. A consistent rank-deficient system (duplicate cuts) is
// solved minimum-norm via COD.
struct RestrictedSolve {
  Eigen::VectorXd y;  // candidate weights on W
  bool has_ray = false;
  Eigen::VectorXd ray;  // ascent direction on W (1^T ray = 0)
};

RestrictedSolve solve_restricted_kkt(const Eigen::MatrixXd& Q, const Vec& d,
                                     const std::vector<int>& W, double scale) {
  const int k = static_cast<int>(W.size());
  Eigen::MatrixXd K(k + 1, k + 1);
  Eigen::VectorXd rhs(k + 1);
  Eigen::VectorXd dW(k);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) K(a, b) = Q(W[a], W[b]);
    K(a, k) = 1.0;
    K(k, a) = 1.0;
    dW(a) = d(W[a]);
    rhs(a) = dW(a);
  }
  K(k, k) = 0.0;
  rhs(k) = 1.0;

  RestrictedSolve out;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
  if (lu.rank() < k + 1) {
    const Eigen::MatrixXd kernel = lu.kernel();
    double best_slope = 1e-12 * scale;
    for (int c = 0; c < kernel.cols(); ++c) {
      Eigen::VectorXd v = kernel.col(c).head(k);
      const double norm = v.norm();
      if (norm <= 0.0) continue;
      v /= norm;
      const double slope = dW.dot(v);
      if (std::abs(slope) > best_slope) {
        best_slope = std::abs(slope);
        out.ray = slope > 0.0 ? v : Eigen::VectorXd(-v);
        out.has_ray = true;
      }
    }
    if (!out.has_ray) {
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(K);
      out.y = cod.solve(rhs).head(k);
    }
  } else {
    out.y = lu.solve(rhs).head(k);
  }
  return out;
}

}  // namespace

SubproblemSolution solve_multicut_subproblem(const std::vector<Cut>& cuts,
                                             const Eigen::Ref<const Vec>& x_center, double rho) {
  if (cuts.empty()) throw ParameterError("cuts: need at least one cut");
  if (!(rho > 0.0)) throw ParameterError("rho: must be positive");
  const int m = static_cast<int>(cuts.size());
  const int n = static_cast<int>(x_center.size());
  for (const Cut& c : cuts)
    if (c.g.size() != n || c.z.size() != n)
      throw ParameterError("cuts: dimension mismatch with x_center");

  Eigen::MatrixXd G(n, m);
  Vec d(m);
  for (int j = 0; j < m; ++j) {
    G.col(j) = cuts[j].g;
    d(j) = cuts[j].eval(x_center);
  }

  // Cuts with exactly equal gradients differ only in intercept; all but the
  // dominating one are dead in the dual and would make the KKT system
  // inconsistent, so drop them up front.
  std::vector<char> pruned(m, 0);
  std::vector<int> kept;
  for (int j = 0; j < m; ++j) {
    if (pruned[j]) continue;
    int best = j;
    for (int i = j + 1; i < m; ++i) {
      if (pruned[i]) continue;
      if ((G.col(i).array() == G.col(j).array()).all()) {
        if (d(i) > d(best)) {
          pruned[best] = 1;
          best = i;
        } else {
          pruned[i] = 1;
        }
      }
    }
    kept.push_back(best);
  }
  std::sort(kept.begin(), kept.end());

  const Eigen::MatrixXd Q = (G.transpose() * G) / rho;
  const double scale =
      1.0 + d.cwiseAbs().maxCoeff() + (m > 0 ? Q.diagonal().cwiseAbs().maxCoeff() : 0.0);
  const double tol_opt = 1e-11 * scale;

  // Fully corrective active set, starting from the best single cut.
  int start = kept[0];
  for (int j : kept)
    if (d(j) > d(start)) start = j;
  std::vector<int> W = {start};
  Eigen::VectorXd lam = Eigen::VectorXd::Ones(1);

  const int cap = 200 + 20 * m;
  int it = 0;
  bool converged = false;
  double last_viol = 0.0;
  for (; it < cap; ++it) {
    const int k = static_cast<int>(W.size());
    const RestrictedSolve rs = solve_restricted_kkt(Q, d, W, scale);

    if (rs.has_ray) {
      // Move along the improving ray until a weight hits zero; drop that cut.
      double t = std::numeric_limits<double>::infinity();
      int blocker = -1;
      for (int a = 0; a < k; ++a) {
        if (rs.ray(a) < -1e-14) {
          const double ta = lam(a) / (-rs.ray(a));
          if (ta < t) {
            t = ta;
            blocker = a;
          }
        }
      }
      if (blocker < 0)
        throw NumericalError("multicut dual: unbounded ray without a blocking weight", 0.0);
      lam = (lam + t * rs.ray).cwiseMax(0.0).eval();
      lam(blocker) = 0.0;
      W.erase(W.begin() + blocker);
      Eigen::VectorXd reduced(k - 1);
      for (int a = 0, b = 0; a < k; ++a)
        if (a != blocker) reduced(b++) = lam(a);
      lam = reduced;
      const double sum = lam.sum();
      if (sum > 0.0) lam /= sum;
      continue;
    }
    const Eigen::VectorXd& y = rs.y;

    if (y.minCoeff() >= -1e-12) {
      lam = y.cwiseMax(0.0);
      lam /= lam.sum();
      Vec s = Vec::Zero(n);
      for (int a = 0; a < k; ++a) s += lam(a) * G.col(W[a]);
      // Stationarity holds across every working-set row of a consistent solve.
      double rmin = std::numeric_limits<double>::infinity(), rmax = -rmin;
      for (int a = 0; a < k; ++a) {
        const double ra = d(W[a]) - G.col(W[a]).dot(s) / rho;
        rmin = std::min(rmin, ra);
        rmax = std::max(rmax, ra);
      }
      if (rmax - rmin > 1e-9 * scale)
        throw NumericalError("multicut dual: working-set stationarity spread", rmax - rmin);
      const double mu = rmax;
      int enter = -1;
      double viol = tol_opt;
      for (int j : kept) {
        if (std::find(W.begin(), W.end(), j) != W.end()) continue;
        const double rj = d(j) - G.col(j).dot(s) / rho;
        if (rj - mu > viol) {
          viol = rj - mu;
          enter = j;
        }
      }
      last_viol = (enter >= 0) ? viol : 0.0;
      if (enter < 0) {
        converged = true;
        break;
      }
      W.push_back(enter);
      lam.conservativeResize(k + 1);
      lam(k) = 0.0;
    } else {
      // Step toward y until the first weight hits zero; drop that cut.
      double t = 1.0;
      int blocker = -1;
      for (int a = 0; a < k; ++a) {
        if (y(a) < lam(a) && y(a) < 0.0) {
          const double ta = lam(a) / (lam(a) - y(a));
          if (ta < t) {
            t = ta;
            blocker = a;
          }
        }
      }
      if (blocker < 0) {  // cannot happen with minCoeff < 0 and feasible lam
        converged = true;
        lam = y.cwiseMax(0.0);
        lam /= lam.sum();
        break;
      }
      lam = (lam + t * (y - lam)).cwiseMax(0.0).eval();
      lam(blocker) = 0.0;
      W.erase(W.begin() + blocker);
      Eigen::VectorXd reduced(k - 1);
      for (int a = 0, b = 0; a < k; ++a)
        if (a != blocker) reduced(b++) = lam(a);
      lam = reduced;
      const double sum = lam.sum();
      if (sum > 0.0) lam /= sum;
    }
  }
  if (!converged)
    throw NumericalError("multicut dual active set did not converge within iteration cap",
                         last_viol);

  SubproblemSolution out;
  out.dual_iterations = it;
  out.lambda.assign(m, 0.0);
  Vec s = Vec::Zero(n);
  for (size_t a = 0; a < W.size(); ++a) {
    out.lambda[W[a]] = lam(static_cast<int>(a));
    s += lam(static_cast<int>(a)) * G.col(W[a]);
  }
  out.z = x_center - s / rho;

  double model = cuts[0].eval(out.z);
  for (int j = 1; j < m; ++j) model = std::max(model, cuts[j].eval(out.z));
  out.model_value = model;

  double compl_res = 0.0;
  double dual_obj = -s.squaredNorm() / (2.0 * rho);
  for (int j = 0; j < m; ++j) {
    if (out.lambda[j] > 1e-12) compl_res = std::max(compl_res, model - cuts[j].eval(out.z));
    dual_obj += out.lambda[j] * d(j);
  }
  out.complementarity = compl_res;
  const double primal_obj = model + 0.5 * rho * (out.z - x_center).squaredNorm();
  out.pd_gap = primal_obj - dual_obj;
  out.recovery_residual = (rho * (x_center - out.z) - s).norm();
  return out;
}

TwoCutSolution solve_two_cut_subproblem(const Cut& newest,
                                        const std::optional<AffinePlane>& aggregate,
                                        const Eigen::Ref<const Vec>& x_center, double rho) {
  if (!(rho > 0.0)) throw ParameterError("rho: must be positive");
  const double dn = newest.eval(x_center);
  const Vec& gn = newest.g;
  if (!aggregate) return {x_center - gn / rho, 0.0};

  const double da = aggregate->eval(x_center);
  const Vec& ga = aggregate->g;
  const Vec dg = ga - gn;
  const double denom = dg.squaredNorm();
  double theta;
  if (denom == 0.0) {
    theta = (da > dn) ? 1.0 : 0.0;  // parallel planes; ties favor the newest cut
  } else {
    theta = (rho * (da - dn) - dg.dot(gn)) / denom;
    theta = std::clamp(theta, 0.0, 1.0);
  }
  Vec z = x_center - (theta * ga + (1.0 - theta) * gn) / rho;
  return {std::move(z), theta};
}

Vec project_simplex(const Eigen::Ref<const Vec>& v) {
  const int m = static_cast<int>(v.size());
  std::vector<double> u(v.data(), v.data() + m);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, tau = 0.0;
  for (int k = 0; k < m; ++k) {
    cum += u[k];
    const double t = (cum - 1.0) / (k + 1);
    if (u[k] - t > 0.0) tau = t;
  }
  return (v.array() - tau).cwiseMax(0.0);
}

std::vector<double> solve_simplex_qp_reference(const std::vector<Cut>& cuts,
                                               const Eigen::Ref<const Vec>& x_center, double rho,
                                               int iterations) {
  const int m = static_cast<int>(cuts.size());
  const int n = static_cast<int>(x_center.size());
  Eigen::MatrixXd G(n, m);
  Vec d(m);
  for (int j = 0; j < m; ++j) {
    G.col(j) = cuts[j].g;
    d(j) = cuts[j].eval(x_center);
  }
  const Eigen::MatrixXd Q = (G.transpose() * G) / rho;
  const double lip = std::max(Q.norm(), 1e-12);

  // FISTA on the negated dual, projecting onto the simplex.
  Vec lam = Vec::Constant(m, 1.0 / m);
  Vec y = lam;
  double t = 1.0;
  for (int it = 0; it < iterations; ++it) {
    const Vec grad = Q * y - d;
    Vec next = project_simplex(y - grad / lip);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = next + ((t - 1.0) / t_next) * (next - lam);
    lam = next;
    t = t_next;
  }
  return std::vector<double>(lam.data(), lam.data() + m);
}

}  // namespace growthlift
