#pragma once

#include <functional>
#include <optional>
#include <string>

#include "holder_opt/core.hpp"
#include "holder_opt/prox.hpp"

namespace holder_opt {

/// Oracle bundle for psi = f + g.
///
/// Oracles are pure; solvers own the counters and bump them per call. The
/// stochastic gradient receives the generator for the draw, so the problem
/// itself holds no mutable state and may be shared between runs.
struct CompositeProblem {
  std::string name;
  Eigen::Index dim = 0;
  std::function<double(const Vector&)> f_value;
  std::function<Vector(const Vector&)> f_grad;
  std::function<Vector(const Vector&, SeededRng&)> f_stoch_grad;  // optional
  ProxOperator g;
  Vector x0;  // default starting point
  std::optional<Vector> known_minimizer;
  std::optional<double> known_min_value;

  bool has_stochastic_gradient() const { return static_cast<bool>(f_stoch_grad); }
  double g_value(const Vector& x) const { return g.value(x); }
  double psi(const Vector& x) const { return f_value(x) + g.value(x); }
  // psi from an already computed f(x).
  double psi_from_f(const Vector& x, double f_x) const { return f_x + g.value(x); }
};

}  // namespace holder_opt
