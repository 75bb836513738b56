#include "holder_opt/agda.hpp"

#include <algorithm>
#include <cmath>

namespace holder_opt {

AgdaState make_agda_state(const CompositeProblem& problem, const Vector& x0, double r_bar,
                          double beta0) {
  if (!(r_bar > 0.0) || !std::isfinite(r_bar)) throw std::invalid_argument("r_bar must be positive");
  if (!(beta0 > 0.0) || !std::isfinite(beta0)) throw std::invalid_argument("beta0 must be positive");
  if (x0.size() != problem.dim) throw DimensionError("x0 dimension does not match the problem");
  if (!x0.allFinite()) throw std::invalid_argument("x0 must be finite");
  if (problem.g.is_indicator() && !problem.g.feasible(x0))
    throw std::invalid_argument("x0 must lie in dom g");

  AgdaState s;
  s.x0 = x0;
  s.v = x0;
  s.y = x0;
  s.x = x0;
  s.S = Vector::Zero(x0.size());
  s.beta = beta0;
  s.beta0 = beta0;
  s.r_bar = r_bar;
  s.r_bar_prev = r_bar;
  s.f_x0 = problem.f_value(x0);
  ++s.counters.f_evals;
  if (!std::isfinite(s.f_x0)) throw std::invalid_argument("f(x0) is not finite");
  s.psi_y = problem.psi_from_f(x0, s.f_x0);
  s.best_point = x0;
  s.best_value = s.psi_y;
  return s;
}

DistanceUpdate update_distances(const AgdaState& state) {
  DistanceUpdate d;
  d.r = (state.x0 - state.v).norm();
  d.r_bar = std::max(state.r_bar, d.r);
  const double root = std::sqrt(d.r_bar);
  d.sqrt_sum = state.sqrt_sum + root;
  // A_{k+1} - A_k without cancellation; equals A_{k+1} bit-exactly at k = 0.
  d.a_next = root * (2.0 * state.sqrt_sum + root);
  d.A_next = d.sqrt_sum * d.sqrt_sum;
  d.tau = std::min(1.0, d.a_next / d.A_next);
  return d;
}

LineSearchTrial eval_l(const AgdaState& state, const IterationContext& ctx,
                       const CompositeProblem& problem, double beta, OracleCounters& counters) {
  const DistanceUpdate& d = ctx.dist;
  LineSearchTrial t;
  t.beta = beta;
  t.v = dual_averaging_argmin(problem.g, state.x0, ctx.S_trial, d.A_next, beta);
  ++counters.prox_evals;
  t.y = convex_combination(d.tau, t.v, state.y);
  t.f_y = problem.f_value(t.y);
  ++counters.f_evals;
  if (!std::isfinite(t.f_y))
    throw LineSearchError("line search: f(y) is not finite at beta = " + std::to_string(beta),
                          beta, t.f_y);
  const Vector diff = t.y - ctx.x;
  t.l = -t.f_y + ctx.f_x + ctx.grad_x.dot(diff) +
        beta / (64.0 * d.tau * d.tau * d.A_next) * diff.squaredNorm() +
        (beta * d.r_bar * d.r_bar - state.beta * state.r_bar * state.r_bar) / (16.0 * d.A_next);
  return t;
}

TraceRecord initial_record(const AgdaState& state) {
  TraceRecord rec;
  rec.iter = state.k;
  rec.psi_y = state.psi_y;
  rec.psi_best = state.best_value;
  rec.beta = state.beta;
  rec.r_bar = state.r_bar;
  rec.A = state.A;
  rec.tau = 0.0;
  rec.counters = state.counters;
  return rec;
}

TraceRecord agda_step(AgdaState& state, const CompositeProblem& problem, int max_doublings) {
  IterationContext ctx;
  ctx.dist = update_distances(state);
  ctx.x = convex_combination(ctx.dist.tau, state.v, state.y);
  ctx.grad_x = problem.f_grad(ctx.x);
  ++state.counters.grad_evals;
  if (!ctx.grad_x.allFinite()) throw std::runtime_error("gradient is not finite");
  if (state.k == 0) {
    ctx.f_x = state.f_x0;
  } else {
    ctx.f_x = problem.f_value(ctx.x);
    ++state.counters.f_evals;
  }
  ctx.S_trial = state.S + ctx.dist.a_next * ctx.grad_x;

  // The accepted beta is always the most recent trial with l >= 0.
  LineSearchTrial accepted;
  auto l = [&](double beta) {
    LineSearchTrial t = eval_l(state, ctx, problem, beta, state.counters);
    const double value = t.l;
    if (value >= 0.0) accepted = std::move(t);
    return value;
  };
  const LineSearchOutcome ls = two_stage_line_search(
      state.beta, bisection_tolerance(state.beta0, state.k), l, max_doublings);

  state.v = std::move(accepted.v);
  state.y = std::move(accepted.y);
  state.x = std::move(ctx.x);
  state.S = std::move(ctx.S_trial);
  state.A = ctx.dist.A_next;
  state.sqrt_sum = ctx.dist.sqrt_sum;
  state.beta = ls.beta_next;
  state.r_bar_prev = state.r_bar;
  state.r_bar = ctx.dist.r_bar;
  state.last_l_value = ls.l_value;
  state.last_f_x = ctx.f_x;
  state.psi_y = problem.psi_from_f(state.y, accepted.f_y);
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
  rec.tau = ctx.dist.tau;
  rec.ls_stage1 = ls.stage1_evals;
  rec.ls_stage2 = ls.stage2_evals;
  rec.counters = state.counters;
  return rec;
}

AgdaRun run_agda(const AgdaOptions& options, const CompositeProblem& problem) {
  WallClock clock(options.timing);
  AgdaRun run{{}, make_agda_state(problem, problem.x0, options.r_bar, options.beta0)};
  run.trace.reserve(options.stop.max_iters + 1);
  run.trace.push_back(initial_record(run.final_state));
  run.trace.back().wall_ms = clock.elapsed_ms();
  while (run.final_state.k < options.stop.max_iters &&
         !options.stop.reached(run.final_state.best_value)) {
    try {
      run.trace.push_back(agda_step(run.final_state, problem, options.max_doublings));
    } catch (const std::exception& e) {
      throw SolverError(std::string("agda iteration ") + std::to_string(run.final_state.k) + ": " +
                            e.what(),
                        run.final_state.k, std::move(run.trace));
    }
    run.trace.back().wall_ms = clock.elapsed_ms();
  }
  return run;
}

}  // namespace holder_opt
