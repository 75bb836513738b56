#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "holder_opt/core.hpp"

namespace holder_opt {

struct GapPoint {
  double iter;
  double gap;
};

class SlopeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMinSlopePoints = 10;

/// Least-squares slope of log(gap) against log(iter). Points with
/// nonpositive gap or iter are dropped; throws when fewer than
/// kMinSlopePoints remain.
double fit_loglog_slope(std::span<const GapPoint> points);

/// Slope over the trailing `window_fraction` of the points.
double estimate_slope(std::span<const GapPoint> points, double window_fraction);

/// Slope over points with iter in [k_lo, k_hi].
double estimate_slope_range(std::span<const GapPoint> points, double k_lo, double k_hi);

/// psi_best - target per record.
std::vector<GapPoint> gap_points(const std::vector<TraceRecord>& trace, double target);

/// First iteration whose best-so-far gap is at most eps.
std::optional<std::uint64_t> iterations_to_gap(const std::vector<TraceRecord>& trace,
                                               double target, double eps);

}  // namespace holder_opt
