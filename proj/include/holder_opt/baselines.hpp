#pragma once

#include <cstdint>
#include <vector>

#include "holder_opt/core.hpp"
#include "holder_opt/problem.hpp"
#include "holder_opt/solver.hpp"

namespace holder_opt {

// Distance-over-gradients stepsize: eta_k = r_bar_k / sqrt(sum ||g_i||^2).
struct DogState {
  std::uint64_t k = 0;
  Vector x;
  Vector x0;
  double r_bar = 0.0;
  double grad_sq_sum = 0.0;
  double eta = 0.0;  // last stepsize, 0 until the first nonzero gradient
  Vector best_point;
  double best_value = 0.0;
  double psi_x = 0.0;
  OracleCounters counters;
};

DogState make_dog_state(const CompositeProblem& problem, const Vector& x0, double r_eps);
TraceRecord dog_step(DogState& state, const CompositeProblem& problem);

struct DogOptions {
  double r_eps = 1e-2;
  StopRule stop;
  bool timing = false;
};
std::vector<TraceRecord> run_dog(const DogOptions& options, const CompositeProblem& problem);

/// Accelerated proximal gradient (FISTA momentum) with stepsize 1/L.
struct AgdFixedState {
  std::uint64_t k = 0;
  Vector x;       // last prox-gradient point
  Vector x_prev;
  Vector y;       // extrapolated point
  double t = 1.0;
  double psi_x0 = 0.0;
  double psi_x = 0.0;
  Vector best_point;
  double best_value = 0.0;
  bool diverged = false;
  OracleCounters counters;
};

// Objective growth beyond psi(x0) + kDivergenceFactor * max(1, |psi(x0)|) marks a run as diverged.
inline constexpr double kDivergenceFactor = 100.0;

AgdFixedState make_agd_fixed_state(const CompositeProblem& problem, const Vector& x0);
TraceRecord agd_fixed_step(AgdFixedState& state, const CompositeProblem& problem, double L);

struct AgdFixedOptions {
  double L = 1.0;
  StopRule stop;
  bool timing = false;
};

struct AgdFixedRun {
  std::vector<TraceRecord> trace;
  bool diverged = false;
};
// Stops early once divergence is detected.
AgdFixedRun run_agd_fixed(const AgdFixedOptions& options, const CompositeProblem& problem);

}  // namespace holder_opt
