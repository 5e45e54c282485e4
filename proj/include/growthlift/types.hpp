#pragma once

#include <Eigen/Core>

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace growthlift {

using Vec = Eigen::VectorXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or malformed input; the message names the offending field.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Operation requires state the object does not have (e.g. a growth certificate).
class StateError : public Error {
 public:
  using Error::Error;
};

/// Solver requires an oracle the problem does not provide.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// An oracle returned something inconsistent with convexity or the certified data.
class OracleError : public Error {
 public:
  using Error::Error;
};

/// An iterative subsolver failed to converge; carries the final residual.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double residual_in)
      : Error(what), residual(residual_in) {}
  double residual;
};

enum class StepKind { init, prox, subgrad, descent, null_step };
enum class Termination { eps_reached, eps_stop_triggered, max_iter };

inline const char* to_string(StepKind k) {
  switch (k) {
    case StepKind::init: return "init";
    case StepKind::prox: return "prox";
    case StepKind::subgrad: return "subgrad";
    case StepKind::descent: return "descent";
    case StepKind::null_step: return "null";
  }
  return "?";
}

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::eps_reached: return "eps_reached";
    case Termination::eps_stop_triggered: return "eps_stop_triggered";
    case Termination::max_iter: return "max_iter";
  }
  return "?";
}

struct SolverConfig {
  double rho = 1.0;          // prox / bundle stepsize (unused by polyak)
  double beta = 0.5;         // bundle descent fraction, in (0,1)
  double eps_stop = 0.0;     // bundle model-gap stopping threshold
  int max_iter = 100000;
  double target_eps = 1e-8;  // trace truncation on the true objective gap
};

/// Affine minorant l(x) = fz + <g, x - z> taken at a query point z.
struct Cut {
  Vec z;
  double fz = 0.0;
  Vec g;

  double eval(const Eigen::Ref<const Vec>& x) const { return fz + g.dot(x - z); }
};

/// Affine plane l(x) = b + <g, x> (aggregate cuts live in this form).
struct AffinePlane {
  Vec g;
  double b = 0.0;

  double eval(const Eigen::Ref<const Vec>& x) const { return b + g.dot(x); }
};

struct WorstResidual {
  double value = 0.0;
  int at = -1;

  void update(double v, int k) {
    if (v > value) {
      value = v;
      at = k;
    }
  }
};

struct TraceRecord {
  int k = 0;
  StepKind step = StepKind::init;
  Vec x;  // incumbent
  Vec z;  // bundle query point (empty for non-bundle methods)
  double value = 0.0;
  double gap = 0.0;   // F(x) - F*
  double dist = 0.0;  // ||x - x*||
  double stepsize = 0.0;
  // Bundle-only fields (NaN / empty otherwise).
  double model_gap = std::numeric_limits<double>::quiet_NaN();  // F(x_{k-1}) - model(z_k)
  double z_value = std::numeric_limits<double>::quiet_NaN();    // F(z_k)
  std::vector<int> model_cut_ids;  // multicut: cut ids in the subproblem that produced z_k
  std::vector<double> lambda;      // dual weights aligned with model_cut_ids
  double theta = std::numeric_limits<double>::quiet_NaN();  // aggregation dual weight
};

struct Trace {
  std::vector<TraceRecord> records;
  Termination termination = Termination::max_iter;

  // Bundle bookkeeping: cut j was taken at z_j.
  std::vector<Cut> cuts;
  double sup_subgrad_norm = 0.0;
  // Max over null steps of ||g_{k+1} - rho (z_{k+1} - x_k)||^2 / rho.
  double measured_m = 0.0;
  WorstResidual agg_identity;  // ||grad aggregate - rho (x_k - z_{k+1})||
  WorstResidual dual_complementarity;
  WorstResidual dual_pd_gap;
  WorstResidual dual_recovery;

  int first_eps_index(double eps) const {
    for (const auto& r : records)
      if (r.gap <= eps) return r.k;
    return -1;
  }
  const TraceRecord& last() const { return records.back(); }
};

}  // namespace growthlift
