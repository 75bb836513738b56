#include "holder_opt/lf_agda.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace holder_opt {

namespace {

enum SampleRole : std::uint64_t { kSampleAtX = 0, kSampleAtY = 1 };

Vector sample_gradient(const CompositeProblem& problem, const Vector& point, SeededRng rng,
                       OracleCounters& counters) {
  Vector g = problem.has_stochastic_gradient() ? problem.f_stoch_grad(point, rng)
                                               : problem.f_grad(point);
  ++counters.stoch_grad_evals;
  if (!g.allFinite()) throw std::runtime_error("stochastic gradient is not finite");
  return g;
}

}  // namespace

double balance_closed_form(double beta, double tau, double A_next, double r_bar, double inner,
                           double dist2) {
  if (!(A_next > 0.0)) throw std::invalid_argument("balance equation: A_next must be positive");
  if (!(r_bar > 0.0)) throw std::invalid_argument("balance equation: r_bar must be positive");
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("balance equation: tau must be in (0, 1]");
  if (!(dist2 >= 0.0)) throw std::invalid_argument("balance equation: dist2 must be >= 0");
  const double t2 = tau * tau;
  const double numer = std::max(0.0, 64.0 * t2 * A_next * inner - beta * dist2);
  return beta + numer / (32.0 * t2 * r_bar * r_bar + dist2);
}

double balance_residual(double beta, double beta_next, double tau, double A_next, double r_bar,
                        double inner, double dist2) {
  const double lhs = (beta_next - beta) * r_bar * r_bar / (2.0 * A_next);
  const double rhs = std::max(0.0, inner - beta_next * dist2 / (64.0 * tau * tau * A_next));
  return lhs - rhs;
}

LfAgdaState make_lf_agda_state(const CompositeProblem& problem, const Vector& x0, double r_bar,
                               std::uint64_t seed) {
  if (!(r_bar > 0.0) || !std::isfinite(r_bar)) throw std::invalid_argument("r_bar must be positive");
  if (x0.size() != problem.dim) throw DimensionError("x0 dimension does not match the problem");
  if (!x0.allFinite()) throw std::invalid_argument("x0 must be finite");
  if (problem.g.is_indicator() && !problem.g.feasible(x0))
    throw std::invalid_argument("x0 must lie in dom g");

  LfAgdaState s{SeededRng(seed)};
  s.x0 = x0;
  s.v = x0;
  s.y = x0;
  s.x = x0;
  s.x_hat = x0;
  s.S = Vector::Zero(x0.size());
  s.r_bar = r_bar;
  s.r_bar_prev = r_bar;
  s.psi_y = problem.psi(x0);
  ++s.counters.f_evals;
  s.best_point = x0;
  s.best_value = s.psi_y;
  return s;
}

namespace {

Vector dual_point(const LfAgdaState& state, const CompositeProblem& problem) {
  if (state.k == 0) return state.x0;
  return dual_averaging_argmin(problem.g, state.x0, state.S, state.A,
                               std::max(state.beta, kBetaFloor));
}

}  // namespace

double lf_peek_r_bar(const LfAgdaState& state, const CompositeProblem& problem) {
  const Vector v = dual_point(state, problem);
  return std::max({state.r_bar, (state.x0 - v).norm(), (state.x0 - state.x_hat).norm()});
}

TraceRecord lf_step(LfAgdaState& state, const CompositeProblem& problem) {
  const double beta_eff = std::max(state.beta, kBetaFloor);

  if (state.k > 0) {
    state.v = dual_point(state, problem);
    ++state.counters.prox_evals;
  }
  const double d = (state.x0 - state.x_hat).norm();
  const double r = (state.x0 - state.v).norm();
  const double r_bar_k = std::max({state.r_bar, r, d});

  const double root = std::sqrt(r_bar_k);
  const double sqrt_sum_next = state.sqrt_sum + root;
  const double a_next = root * (2.0 * state.sqrt_sum + root);
  const double A_next = sqrt_sum_next * sqrt_sum_next;
  const double tau = std::min(1.0, a_next / A_next);

  Vector x = convex_combination(tau, state.v, state.y);
  const Vector gx = sample_gradient(problem, x, state.rng.substream(state.k, kSampleAtX),
                                    state.counters);

  const double step = a_next / beta_eff;
  Vector x_hat = problem.g.prox(state.v - step * gx, step);
  ++state.counters.prox_evals;
  Vector y = convex_combination(tau, x_hat, state.y);
  const Vector gy = sample_gradient(problem, y, state.rng.substream(state.k, kSampleAtY),
                                    state.counters);

  const Vector diff = y - x;
  const double beta_next =
      balance_closed_form(state.beta, tau, A_next, r_bar_k, (gy - gx).dot(diff), diff.squaredNorm());

  state.S += a_next * gx;
  state.A = A_next;
  state.sqrt_sum = sqrt_sum_next;
  state.beta = beta_next;
  state.r_bar_prev = state.r_bar;
  state.r_bar = r_bar_k;
  state.last_d = d;
  state.x = std::move(x);
  state.x_hat = std::move(x_hat);
  state.y = std::move(y);
  state.psi_y = problem.psi(state.y);
  ++state.counters.f_evals;
  if (state.psi_y < state.best_value) {
    state.best_value = state.psi_y;
    state.best_point = state.y;
  }
  ++state.k;

  TraceRecord rec;
  rec.iter = state.k;
  rec.psi_y = state.psi_y;
  rec.psi_best = state.best_value;
  rec.beta = state.beta;
  rec.r_bar = state.r_bar;
  rec.A = state.A;
  rec.tau = tau;
  rec.counters = state.counters;
  return rec;
}

LfAgdaRun run_lf_agda(const LfAgdaOptions& options, const CompositeProblem& problem) {
  WallClock clock(options.timing);
  LfAgdaRun run{{}, make_lf_agda_state(problem, problem.x0, options.r_bar, options.seed)};
  auto& state = run.final_state;

  TraceRecord first;
  first.psi_y = state.psi_y;
  first.psi_best = state.best_value;
  first.r_bar = state.r_bar;
  first.counters = state.counters;
  run.trace.push_back(first);

  while (state.k < options.stop.max_iters && !options.stop.reached(state.best_value)) {
    try {
      run.trace.push_back(lf_step(state, problem));
    } catch (const std::exception& e) {
      throw SolverError(std::string("lf_agda iteration ") + std::to_string(state.k) + ": " + e.what(),
                        state.k, std::move(run.trace));
    }
    run.trace.back().wall_ms = clock.elapsed_ms();
  }

  // Record j carries A_j and r_bar_{j-1}; r_bar_j comes from record j + 1,
  // or from a look-ahead for the final iterate.
  const std::uint64_t K = state.k;
  if (K >= 1) {
    double best_ratio = HUGE_VAL;
    double best_sqrt_ratio = HUGE_VAL;
    for (std::uint64_t j = 1; j <= K; ++j) {
      const double r_bar_j = j < K ? run.trace[j + 1].r_bar : lf_peek_r_bar(state, problem);
      const double A_j = run.trace[j].A;
      const double ratio = r_bar_j / A_j;
      const double sqrt_ratio = std::sqrt(r_bar_j) / std::sqrt(A_j);
      if (ratio < best_ratio) {
        best_ratio = ratio;
        run.kstar_ratio = j;
      }
      if (sqrt_ratio < best_sqrt_ratio) {
        best_sqrt_ratio = sqrt_ratio;
        run.kstar_sqrt_ratio = j;
      }
    }
    run.psi_at_kstar = run.trace[run.kstar_ratio].psi_y;
  }
  return run;
}

}  // namespace holder_opt
