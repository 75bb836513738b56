#pragma once

#include <cstdint>
#include <vector>

#include "holder_opt/agda.hpp"
#include "holder_opt/core.hpp"
#include "holder_opt/problem.hpp"
#include "holder_opt/solver.hpp"

namespace holder_opt {

// Stands in for beta_k in the two divisions while beta_k == 0.
inline constexpr double kBetaFloor = 1e-12;

/// Root of (b+ - beta) r_bar^2 / (2 A) = [inner - b+ dist2 / (64 tau^2 A)]_+.
///
/// Multiplying through by 64 tau^2 A gives (b+ - beta) r = [l - b+ d]_+ with
/// r = 32 tau^2 r_bar^2, l = 64 tau^2 A inner and d = dist2, whose unique
/// root is beta + [l - beta d]_+ / (r + d).
double balance_closed_form(double beta, double tau, double A_next, double r_bar, double inner,
                           double dist2);

/// Signed residual LHS - RHS of the balance equation at `beta_next`.
double balance_residual(double beta, double beta_next, double tau, double A_next, double r_bar,
                        double inner, double dist2);

struct LfAgdaState {
  std::uint64_t k = 0;
  Vector x0;
  Vector v;
  Vector y;
  Vector x;
  Vector x_hat;
  Vector S;  // sum_i a_i * stochastic grad f(x^i)
  double A = 0.0;
  double sqrt_sum = 0.0;
  double beta = 0.0;
  double r_bar = 0.0;  // r_bar_{k-1}
  double r_bar_prev = 0.0;
  double last_d = 0.0;  // d_k of the most recent step
  SeededRng rng;
  Vector best_point;
  double best_value = 0.0;
  double psi_y = 0.0;
  OracleCounters counters;

  explicit LfAgdaState(SeededRng r) : rng(std::move(r)) {}
};

LfAgdaState make_lf_agda_state(const CompositeProblem& problem, const Vector& x0, double r_bar,
                               std::uint64_t seed);

/// One iteration: two stochastic gradient draws, from the (k, x) and (k, y)
/// substreams of the state's generator. Problems without a stochastic
/// oracle are sampled through their exact gradient. Best-so-far tracking
/// uses the deterministic psi and does not feed back into the iteration.
TraceRecord lf_step(LfAgdaState& state, const CompositeProblem& problem);

/// r_bar_k the next step would use; evaluates one prox, touches no counters.
double lf_peek_r_bar(const LfAgdaState& state, const CompositeProblem& problem);

struct LfAgdaOptions {
  double r_bar = kDefaultRBar;
  std::uint64_t seed = 0;
  StopRule stop;
  bool timing = false;
};

struct LfAgdaRun {
  std::vector<TraceRecord> trace;
  LfAgdaState final_state;
  // argmin_{1<=k<=K} r_bar_k / A_k and argmin sqrt(r_bar_k) / sum_{i<k} sqrt(r_bar_i).
  std::uint64_t kstar_ratio = 0;
  std::uint64_t kstar_sqrt_ratio = 0;
  double psi_at_kstar = 0.0;
};

LfAgdaRun run_lf_agda(const LfAgdaOptions& options, const CompositeProblem& problem);

}  // namespace holder_opt
