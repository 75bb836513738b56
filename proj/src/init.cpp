#include "holder_opt/init.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "holder_opt/agda.hpp"

namespace holder_opt {

namespace {

void accumulate(OracleCounters& total, const OracleCounters& part) {
  total.f_evals += part.f_evals;
  total.grad_evals += part.grad_evals;
  total.stoch_grad_evals += part.stoch_grad_evals;
  total.prox_evals += part.prox_evals;
}

}  // namespace

std::pair<double, InitDiagnostics> init_beta0(const CompositeProblem& problem, const Vector& x0,
                                              double r_bar, const std::optional<Vector>& probe,
                                              SeededRng& rng) {
  if (!(r_bar > 0.0)) throw std::invalid_argument("init_beta0: r_bar must be positive");
  if (x0.size() != problem.dim) throw DimensionError("init_beta0: x0 dimension mismatch");

  InitDiagnostics diag;
  const double f0 = problem.f_value(x0);
  const Vector g0 = problem.f_grad(x0);
  ++diag.counters.f_evals;
  ++diag.counters.grad_evals;

  auto bregman_gap = [&](const Vector& xp) {
    ++diag.counters.f_evals;
    const double gap = problem.f_value(xp) - f0 - g0.dot(xp - x0);
    diag.probe_points.emplace_back(xp, gap);
    ++diag.probes_used;
    return gap;
  };

  Vector chosen;
  double gap = 0.0;
  if (probe) {
    if (probe->size() != x0.size()) throw DimensionError("init_beta0: probe dimension mismatch");
    if ((*probe - x0).norm() > r_bar * (1.0 + 1e-12))
      throw std::invalid_argument("init_beta0: probe must satisfy ||x' - x0|| <= r_bar");
    gap = bregman_gap(*probe);
    chosen = *probe;
    if (!(gap > 0.0))
      throw InitError("cannot auto-initialize beta0 (Bregman gap at the probe is not positive); supply one");
  } else {
    for (int attempt = 0; attempt < kBeta0ProbeAttempts; ++attempt) {
      Vector xp = x0 + r_bar * rng.unit_vector(x0.size());
      gap = bregman_gap(xp);
      if (gap > kMinBregmanGap) {
        chosen = std::move(xp);
        break;
      }
    }
    if (!(gap > kMinBregmanGap))
      throw InitError("cannot auto-initialize beta0 (f looks affine near x0); supply one");
  }

  const double r2 = r_bar * r_bar;
  const double c = std::min(gap / r2, 0.5);
  const double M = 2.0 * (gap - c * r2 / 2.0) / (x0 - chosen).squaredNorm();
  const double beta0 = std::sqrt(c) * r_bar * std::min(std::sqrt(128.0 * M), 128.0 * M);

  diag.c = c;
  diag.M = M;
  diag.alternative_value =
      r_bar * std::max(8.0 * std::sqrt(2.0 * M), 128.0 * M) * std::min(1.0, std::sqrt(c));
  diag.chosen_value = beta0;
  if (!(beta0 > 0.0) || !std::isfinite(beta0))
    throw InitError("beta0 auto-initialization produced a non-positive value; supply one");
  return {beta0, std::move(diag)};
}

std::pair<double, InitDiagnostics> init_rbar(const CompositeProblem& problem, const Vector& x0,
                                             double r_guess, double beta0, int max_halvings) {
  if (!(r_guess > 0.0)) throw std::invalid_argument("init_rbar: r_guess must be positive");
  if (!(beta0 > 0.0)) throw std::invalid_argument("init_rbar: beta0 must be positive");
  if (!problem.g.interior(x0))
    throw std::invalid_argument("init_rbar: x0 must be interior to dom g");
  if (std::holds_alternative<g_kind::L1>(problem.g.kind()))
    throw std::invalid_argument("init_rbar: g must be zero on its domain");

  InitDiagnostics diag;
  double d = r_guess;
  for (int i = 0; i <= max_halvings; ++i, d *= 0.5) {
    AgdaState state = make_agda_state(problem, x0, d, beta0);
    agda_step(state, problem);
    accumulate(diag.counters, state.counters);
    const double r1 = (state.v - x0).norm();
    diag.probe_points.emplace_back(state.v, r1);
    ++diag.probes_used;
    if (problem.g.interior(state.v) && r1 >= d) {
      diag.chosen_value = d;
      return {d, std::move(diag)};
    }
  }
  throw InitError("r_bar auto-init failed after " + std::to_string(max_halvings) +
                  " halvings; grad f(x0) is likely zero");
}

}  // namespace holder_opt
