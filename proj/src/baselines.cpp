#include "holder_opt/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace holder_opt {

namespace {

void check_start(const CompositeProblem& problem, const Vector& x0) {
  if (x0.size() != problem.dim) throw DimensionError("x0 dimension does not match the problem");
  if (problem.g.is_indicator() && !problem.g.feasible(x0))
    throw std::invalid_argument("x0 must lie in dom g");
}

TraceRecord record_of(std::uint64_t k, double psi, double best, double r_bar,
                      const OracleCounters& c) {
  TraceRecord rec;
  rec.iter = k;
  rec.psi_y = psi;
  rec.psi_best = best;
  rec.r_bar = r_bar;
  rec.counters = c;
  return rec;
}

}  // namespace

DogState make_dog_state(const CompositeProblem& problem, const Vector& x0, double r_eps) {
  if (!(r_eps > 0.0)) throw std::invalid_argument("dog: r_eps must be positive");
  check_start(problem, x0);
  DogState s;
  s.x = x0;
  s.x0 = x0;
  s.r_bar = r_eps;
  s.psi_x = problem.psi(x0);
  ++s.counters.f_evals;
  s.best_point = x0;
  s.best_value = s.psi_x;
  return s;
}

TraceRecord dog_step(DogState& state, const CompositeProblem& problem) {
  const Vector g = problem.f_grad(state.x);
  ++state.counters.grad_evals;
  state.grad_sq_sum += g.squaredNorm();
  state.r_bar = std::max(state.r_bar, (state.x - state.x0).norm());
  if (state.grad_sq_sum > 0.0) {
    state.eta = state.r_bar / std::sqrt(state.grad_sq_sum);
    state.x = problem.g.prox(state.x - state.eta * g, state.eta);
    ++state.counters.prox_evals;
    state.psi_x = problem.psi(state.x);
    ++state.counters.f_evals;
  }
  if (state.psi_x < state.best_value) {
    state.best_value = state.psi_x;
    state.best_point = state.x;
  }
  ++state.k;
  return record_of(state.k, state.psi_x, state.best_value, state.r_bar, state.counters);
}

std::vector<TraceRecord> run_dog(const DogOptions& options, const CompositeProblem& problem) {
  WallClock clock(options.timing);
  DogState state = make_dog_state(problem, problem.x0, options.r_eps);
  std::vector<TraceRecord> trace{
      record_of(0, state.psi_x, state.best_value, state.r_bar, state.counters)};
  while (state.k < options.stop.max_iters && !options.stop.reached(state.best_value)) {
    try {
      trace.push_back(dog_step(state, problem));
    } catch (const std::exception& e) {
      throw SolverError(std::string("dog iteration ") + std::to_string(state.k) + ": " + e.what(),
                        state.k, std::move(trace));
    }
    trace.back().wall_ms = clock.elapsed_ms();
  }
  return trace;
}

AgdFixedState make_agd_fixed_state(const CompositeProblem& problem, const Vector& x0) {
  check_start(problem, x0);
  AgdFixedState s;
  s.x = x0;
  s.x_prev = x0;
  s.y = x0;
  s.psi_x0 = problem.psi(x0);
  ++s.counters.f_evals;
  s.psi_x = s.psi_x0;
  s.best_point = x0;
  s.best_value = s.psi_x0;
  return s;
}

TraceRecord agd_fixed_step(AgdFixedState& state, const CompositeProblem& problem, double L) {
  if (!(L > 0.0)) throw std::invalid_argument("agd_fixed: L must be positive");
  const Vector g = problem.f_grad(state.y);
  ++state.counters.grad_evals;
  const double step = 1.0 / L;
  state.x_prev = std::move(state.x);
  state.x = problem.g.prox(state.y - step * g, step);
  ++state.counters.prox_evals;
  const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * state.t * state.t));
  state.y = state.x + ((state.t - 1.0) / t_next) * (state.x - state.x_prev);
  state.t = t_next;
  state.psi_x = problem.psi(state.x);
  ++state.counters.f_evals;
  if (!std::isfinite(state.psi_x) ||
      state.psi_x > state.psi_x0 + kDivergenceFactor * std::max(1.0, std::abs(state.psi_x0)))
    state.diverged = true;
  if (state.psi_x < state.best_value) {
    state.best_value = state.psi_x;
    state.best_point = state.x;
  }
  ++state.k;
  TraceRecord rec = record_of(state.k, state.psi_x, state.best_value, 0.0, state.counters);
  rec.beta = L;
  return rec;
}

AgdFixedRun run_agd_fixed(const AgdFixedOptions& options, const CompositeProblem& problem) {
  if (!(options.L > 0.0)) throw std::invalid_argument("agd_fixed: L must be positive");
  WallClock clock(options.timing);
  AgdFixedState state = make_agd_fixed_state(problem, problem.x0);
  AgdFixedRun run;
  TraceRecord first = record_of(0, state.psi_x, state.best_value, 0.0, state.counters);
  first.beta = options.L;
  run.trace.push_back(first);
  while (state.k < options.stop.max_iters && !options.stop.reached(state.best_value) &&
         !state.diverged) {
    try {
      run.trace.push_back(agd_fixed_step(state, problem, options.L));
    } catch (const std::exception& e) {
      throw SolverError(std::string("agd_fixed iteration ") + std::to_string(state.k) + ": " +
                            e.what(),
                        state.k, std::move(run.trace));
    }
    run.trace.back().wall_ms = clock.elapsed_ms();
  }
  run.diverged = state.diverged;
  return run;
}

}  // namespace holder_opt
