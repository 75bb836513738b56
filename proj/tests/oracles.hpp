#pragma once

// Reference computations for tests. Each one is deliberately naive and
// shares no code with the library routine it checks.

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "holder_opt/core.hpp"

namespace oracle {

using holder_opt::SeededRng;
using holder_opt::Vector;

/// Euclidean projection onto the unit simplex by enumerating supports.
/// For support S the stationarity conditions give x_i = z_i - theta on S with
/// theta = (sum_S z - 1) / |S|; the KKT point additionally needs x_i >= 0 on
/// S and z_j <= theta off S.
inline Vector simplex_projection(const Vector& z) {
  const int n = static_cast<int>(z.size());
  if (n > 20) throw std::invalid_argument("oracle: dimension too large for enumeration");
  std::optional<Vector> best;
  double best_violation = HUGE_VAL;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    double sum = 0.0;
    int count = 0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) {
        sum += z[i];
        ++count;
      }
    const double theta = (sum - 1.0) / count;
    double violation = 0.0;
    Vector x = Vector::Zero(n);
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        x[i] = z[i] - theta;
        violation = std::max(violation, -x[i]);
      } else {
        violation = std::max(violation, z[i] - theta);
      }
    }
    if (violation < best_violation) {
      best_violation = violation;
      best = x;
    }
  }
  return *best;
}

/// Projection onto [lo, hi] by enumerating each coordinate's active state
/// (at lo, at hi, or free) and keeping the state vector satisfying KKT.
inline Vector box_projection(const Vector& z, const Vector& lo, const Vector& hi) {
  const int n = static_cast<int>(z.size());
  if (n > 12) throw std::invalid_argument("oracle: dimension too large for enumeration");
  int total = 1;
  for (int i = 0; i < n; ++i) total *= 3;
  std::optional<Vector> best;
  double best_violation = HUGE_VAL;
  for (int code = 0; code < total; ++code) {
    int c = code;
    Vector x(n);
    double violation = 0.0;
    for (int i = 0; i < n; ++i, c /= 3) {
      switch (c % 3) {
        case 0:  // at lo: multiplier z - lo must be <= 0
          x[i] = lo[i];
          violation = std::max(violation, z[i] - lo[i]);
          break;
        case 1:  // at hi: z - hi must be >= 0
          x[i] = hi[i];
          violation = std::max(violation, hi[i] - z[i]);
          break;
        default:  // free: must already be inside
          x[i] = z[i];
          violation = std::max({violation, lo[i] - z[i], z[i] - hi[i]});
      }
    }
    if (violation < best_violation) {
      best_violation = violation;
      best = x;
    }
  }
  return *best;
}

/// Root of a nondecreasing function on [lo, hi] by plain bisection.
inline double bisect_root(const std::function<double(double)>& h, double lo, double hi,
                          int iterations = 400) {
  if (h(lo) > 0.0 || h(hi) < 0.0) throw std::invalid_argument("oracle: root not bracketed");
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (h(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// log-uniform draw on [lo, hi].
inline double log_uniform(SeededRng& rng, double lo, double hi) {
  return std::exp(rng.uniform(std::log(lo), std::log(hi)));
}

inline Vector random_vector(SeededRng& rng, int n, double scale) {
  return rng.uniform_vector(n, -scale, scale);
}

}  // namespace oracle
