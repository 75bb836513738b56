#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace holder_opt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Checked vector kernels. Eigen only asserts on size mismatch, these throw.
double dot(const Vector& a, const Vector& b);
double norm2(const Vector& a);
Vector axpy(double alpha, const Vector& x, const Vector& y);
// tau * a + (1 - tau) * b, returns `a` bit-exactly when tau == 1.
Vector convex_combination(double tau, const Vector& a, const Vector& b);
bool all_finite(const Vector& a);

struct OracleCounters {
  std::uint64_t f_evals = 0;
  std::uint64_t grad_evals = 0;
  std::uint64_t stoch_grad_evals = 0;
  std::uint64_t prox_evals = 0;

  bool operator==(const OracleCounters&) const = default;
};

/// One row of solver telemetry. Records of a run are emitted in iteration
/// order; record 0 describes the initial state.
struct TraceRecord {
  std::uint64_t iter = 0;
  double psi_y = 0.0;     // objective at the newest y iterate
  double psi_best = 0.0;  // best objective seen so far
  double beta = 0.0;
  double r_bar = 0.0;
  double A = 0.0;
  double tau = 0.0;
  std::uint64_t ls_stage1 = 0;
  std::uint64_t ls_stage2 = 0;
  OracleCounters counters;
  double wall_ms = 0.0;

  bool operator==(const TraceRecord&) const = default;
};

/// Reproducible random source.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. The seed words are derived from (seed, stream_id) with the
/// SplitMix64 finalizer. Distribution transforms are implemented here rather
/// than with <random> distributions, whose algorithms are unspecified, so a
/// given (seed, stream_id) yields the same draws on every platform.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  double uniform(double lo, double hi);
  // Uniform integer in [0, n), unbiased (rejection on the top range).
  std::uint64_t uniform_index(std::uint64_t n);
  // Standard normal via Box-Muller; one spare value is cached.
  double normal();

  Vector uniform_vector(Eigen::Index n, double lo, double hi);
  Vector normal_vector(Eigen::Index n);
  Matrix uniform_matrix(Eigen::Index rows, Eigen::Index cols, double lo, double hi);
  // Uniformly distributed direction on the unit sphere.
  Vector unit_vector(Eigen::Index n);

  // Independent generator for a (key, role) pair below this stream.
  SeededRng substream(std::uint64_t key, std::uint64_t role) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace holder_opt
