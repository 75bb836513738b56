#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "holder_opt/core.hpp"
#include "holder_opt/problem.hpp"
#include "holder_opt/solver.hpp"

namespace holder_opt {

inline constexpr double kDefaultBeta0 = 1e-3;
inline constexpr double kDefaultRBar = 1e-3;
inline constexpr int kMaxDoublings = 200;

/// Iterate state of the accelerated distance-adaptive method.
///
/// At the start of iteration k the fields hold: v^k, y^k, x^k, the weighted
/// gradient sum S = sum_{i<=k} a_i grad f(x^i), A = A_k, sqrt_sum =
/// sum_{i<k} sqrt(r_bar_i), beta = beta_k and r_bar = r_bar_{k-1}.
struct AgdaState {
  std::uint64_t k = 0;
  Vector x0;
  Vector v;
  Vector y;
  Vector x;
  Vector S;
  double A = 0.0;
  double sqrt_sum = 0.0;
  double beta = 0.0;
  double r_bar = 0.0;
  double r_bar_prev = 0.0;
  double beta0 = 0.0;
  Vector best_point;
  double best_value = 0.0;
  double psi_y = 0.0;
  // f(x^0); reused as f(x^1) because x^1 = x^0 exactly.
  double f_x0 = 0.0;
  // l_k(beta_{k+1}) and f(x^{k+1}) of the most recent step.
  double last_l_value = 0.0;
  double last_f_x = 0.0;
  OracleCounters counters;
};

/// Validates inputs and evaluates psi(x0) (one f evaluation).
AgdaState make_agda_state(const CompositeProblem& problem, const Vector& x0, double r_bar,
                          double beta0);

struct DistanceUpdate {
  double r = 0.0;         // ||x0 - v^k||
  double r_bar = 0.0;     // max(r_bar_{k-1}, r)
  double sqrt_sum = 0.0;  // sum_{i<=k} sqrt(r_bar_i)
  double a_next = 0.0;
  double A_next = 0.0;
  double tau = 0.0;
};

DistanceUpdate update_distances(const AgdaState& state);

/// Quantities fixed for every trial beta of one outer iteration.
struct IterationContext {
  DistanceUpdate dist;
  Vector x;  // x^{k+1}
  Vector grad_x;
  double f_x = 0.0;
  Vector S_trial;  // S + a_{k+1} grad f(x^{k+1})
};

struct LineSearchTrial {
  double beta = 0.0;
  double l = 0.0;
  Vector v;
  Vector y;
  double f_y = 0.0;
};

/// Evaluates l_k(beta): one prox solve and one f evaluation.
LineSearchTrial eval_l(const AgdaState& state, const IterationContext& ctx,
                       const CompositeProblem& problem, double beta, OracleCounters& counters);

class LineSearchError : public std::runtime_error {
 public:
  LineSearchError(const std::string& what, double last_beta, double last_l)
      : std::runtime_error(what), last_beta_(last_beta), last_l_(last_l) {}
  double last_beta() const { return last_beta_; }
  double last_l() const { return last_l_; }

 private:
  double last_beta_;
  double last_l_;
};

struct LineSearchOutcome {
  double beta_next = 0.0;
  std::uint64_t stage1_evals = 0;
  std::uint64_t stage2_evals = 0;
  double l_value = 0.0;
};

/// Bracket width at which iteration k stops bisecting.
inline double bisection_tolerance(double beta0, std::uint64_t k) {
  const double kk = static_cast<double>(k < 1 ? 1 : k);
  return beta0 / (2.0 * kk * kk);
}

/// Two-stage search for beta with l(beta) >= 0.
///
/// Stage 1 doubles from beta_k until l(2^{i-1} beta_k) >= 0. If that
/// happened at i = 1 the search stops; otherwise stage 2 bisects
/// [2^{i-2} beta_k, 2^{i-1} beta_k] keeping l(right) >= 0 until the width is
/// at most `tolerance`, and returns the right endpoint.
template <class LFn>
LineSearchOutcome two_stage_line_search(double beta_k, double tolerance, LFn&& l,
                                        int max_doublings = kMaxDoublings) {
  if (!(beta_k > 0.0)) throw std::invalid_argument("line search: beta_k must be positive");
  LineSearchOutcome out;
  double beta = beta_k;
  double value = 0.0;
  for (int i = 1;; ++i) {
    value = l(beta);
    ++out.stage1_evals;
    if (std::isnan(value)) throw LineSearchError("line search: l(beta) is NaN", beta, value);
    if (value >= 0.0) break;
    if (i > max_doublings)
      throw LineSearchError("line search diverged after " + std::to_string(max_doublings) +
                                " doublings, last l = " + std::to_string(value),
                            beta, value);
    beta *= 2.0;
  }
  if (out.stage1_evals == 1) {
    out.beta_next = beta_k;
    out.l_value = value;
    return out;
  }
  double lo = beta / 2.0;
  double hi = beta;
  double l_hi = value;
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;  // bracket exhausted in floating point
    const double l_mid = l(mid);
    ++out.stage2_evals;
    if (std::isnan(l_mid)) throw LineSearchError("line search: l(beta) is NaN", mid, l_mid);
    if (l_mid < 0.0) {
      lo = mid;
    } else {
      hi = mid;
      l_hi = l_mid;
    }
  }
  out.beta_next = hi;
  out.l_value = l_hi;
  return out;
}

/// One outer iteration; exactly one gradient evaluation.
TraceRecord agda_step(AgdaState& state, const CompositeProblem& problem,
                      int max_doublings = kMaxDoublings);

TraceRecord initial_record(const AgdaState& state);

struct AgdaOptions {
  double r_bar = kDefaultRBar;
  double beta0 = kDefaultBeta0;
  StopRule stop;
  bool timing = false;
  int max_doublings = kMaxDoublings;
};

struct AgdaRun {
  std::vector<TraceRecord> trace;
  AgdaState final_state;
};

/// Runs from problem.x0. Throws SolverError with the partial trace on failure.
AgdaRun run_agda(const AgdaOptions& options, const CompositeProblem& problem);

}  // namespace holder_opt
