#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "holder_opt/core.hpp"
#include "holder_opt/problem.hpp"

namespace holder_opt {

class InitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InitDiagnostics {
  double chosen_value = 0.0;
  std::size_t probes_used = 0;
  // (probe point, value observed there): the Bregman gap for beta0, the
  // first-step distance r_1 for r_bar.
  std::vector<std::pair<Vector, double>> probe_points;
  // beta0 only: the curvature floor c, the model curvature M, and the
  // r_bar * max{8 sqrt(2M), 128M} * min{1, sqrt(c)} variant for comparison.
  double c = 0.0;
  double M = 0.0;
  double alternative_value = 0.0;
  OracleCounters counters;
};

inline constexpr int kBeta0ProbeAttempts = 32;
inline constexpr double kMinBregmanGap = 1e-14;
inline constexpr int kMaxRBarHalvings = 60;

/// Chooses beta0 from the Bregman gap of f at one probe point x' with
/// ||x' - x0|| <= r_bar. Without an explicit probe, x' = x0 + r_bar * u for
/// random unit u, retried until the gap exceeds kMinBregmanGap.
///   c     = min{gap / r_bar^2, 1/2}
///   M     = 2 (gap - c r_bar^2 / 2) / ||x0 - x'||^2
///   beta0 = sqrt(c) r_bar min{sqrt(128 M), 128 M}
std::pair<double, InitDiagnostics> init_beta0(const CompositeProblem& problem, const Vector& x0,
                                              double r_bar, const std::optional<Vector>& probe,
                                              SeededRng& rng);

/// Halves d = r_guess, r_guess / 2, ... until one AGDA step from x0 with
/// r_bar = d moves v^1 at least d away from x0 (and v^1 stays interior to
/// dom g), and returns that d. Requires g == 0 or x0 interior to dom g.
std::pair<double, InitDiagnostics> init_rbar(const CompositeProblem& problem, const Vector& x0,
                                             double r_guess, double beta0,
                                             int max_halvings = kMaxRBarHalvings);

}  // namespace holder_opt
