#include "holder_opt/slope.hpp"

#include <cmath>
#include <string>

namespace holder_opt {

double fit_loglog_slope(std::span<const GapPoint> points) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (const auto& p : points) {
    if (!(p.gap > 0.0) || !(p.iter > 0.0) || !std::isfinite(p.gap)) continue;
    const double lx = std::log(p.iter);
    const double ly = std::log(p.gap);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < kMinSlopePoints)
    throw SlopeError("slope: need at least " + std::to_string(kMinSlopePoints) +
                     " positive-gap points, got " + std::to_string(n));
  const double nn = static_cast<double>(n);
  const double denom = nn * sxx - sx * sx;
  if (!(denom > 0.0)) throw SlopeError("slope: iterations are not distinct");
  return (nn * sxy - sx * sy) / denom;
}

double estimate_slope(std::span<const GapPoint> points, double window_fraction) {
  if (!(window_fraction > 0.0 && window_fraction <= 1.0))
    throw std::invalid_argument("slope: window fraction must be in (0, 1]");
  const auto count = static_cast<std::size_t>(
      std::ceil(window_fraction * static_cast<double>(points.size())));
  return fit_loglog_slope(points.subspan(points.size() - count));
}

double estimate_slope_range(std::span<const GapPoint> points, double k_lo, double k_hi) {
  std::vector<GapPoint> window;
  for (const auto& p : points)
    if (p.iter >= k_lo && p.iter <= k_hi) window.push_back(p);
  return fit_loglog_slope(window);
}

std::vector<GapPoint> gap_points(const std::vector<TraceRecord>& trace, double target) {
  std::vector<GapPoint> points;
  points.reserve(trace.size());
  for (const auto& r : trace) points.push_back({static_cast<double>(r.iter), r.psi_best - target});
  return points;
}

std::optional<std::uint64_t> iterations_to_gap(const std::vector<TraceRecord>& trace,
                                               double target, double eps) {
  for (const auto& r : trace)
    if (r.psi_best - target <= eps) return r.iter;
  return std::nullopt;
}

}  // namespace holder_opt
