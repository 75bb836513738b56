#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "holder_opt/core.hpp"

namespace holder_opt {

/// Raised by a run loop; carries the records produced before the failure.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::uint64_t iteration, std::vector<TraceRecord> partial)
      : std::runtime_error(what), iteration_(iteration), partial_(std::move(partial)) {}
  std::uint64_t iteration() const { return iteration_; }
  const std::vector<TraceRecord>& partial_trace() const { return partial_; }

 private:
  std::uint64_t iteration_;
  std::vector<TraceRecord> partial_;
};

struct StopRule {
  std::uint64_t max_iters = 1000;
  std::optional<double> target_value;
  std::optional<double> tol;

  bool reached(double psi_best) const {
    return target_value && tol && psi_best - *target_value <= *tol;
  }
};

// Elapsed-milliseconds source for trace records; reports 0 when disabled so
// traces stay byte-reproducible.
class WallClock {
 public:
  explicit WallClock(bool enabled) : enabled_(enabled), start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    if (!enabled_) return 0.0;
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace holder_opt
