#include "holder_opt/core.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace holder_opt {

namespace {

void require_same_size(const Vector& a, const Vector& b, const char* op) {
  if (a.size() != b.size()) {
    throw DimensionError(std::string(op) + ": dimension mismatch (" + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()) + ")");
  }
}

}  // namespace

double dot(const Vector& a, const Vector& b) {
  require_same_size(a, b, "dot");
  return a.dot(b);
}

double norm2(const Vector& a) { return a.norm(); }

Vector axpy(double alpha, const Vector& x, const Vector& y) {
  require_same_size(x, y, "axpy");
  return alpha * x + y;
}

Vector convex_combination(double tau, const Vector& a, const Vector& b) {
  require_same_size(a, b, "convex_combination");
  if (tau == 1.0) return a;
  return tau * a + (1.0 - tau) * b;
}

bool all_finite(const Vector& a) { return a.allFinite(); }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

SeededRng::SeededRng(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  const std::uint64_t s0 = splitmix64(seed);
  const std::uint64_t s1 = splitmix64(s0 ^ splitmix64(stream_id + 0x632BE59BD9B4E019ull));
  std::seed_seq seq{static_cast<std::uint32_t>(s0), static_cast<std::uint32_t>(s0 >> 32),
                    static_cast<std::uint32_t>(s1), static_cast<std::uint32_t>(s1 >> 32)};
  engine_.seed(seq);
}

std::uint64_t SeededRng::next_u64() { return engine_(); }

double SeededRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SeededRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t SeededRng::uniform_index(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t u;
  do {
    u = next_u64();
  } while (u >= limit);
  return u % n;
}

double SeededRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Vector SeededRng::uniform_vector(Eigen::Index n, double lo, double hi) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
  return v;
}

Vector SeededRng::normal_vector(Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
  return v;
}

Matrix SeededRng::uniform_matrix(Eigen::Index rows, Eigen::Index cols, double lo, double hi) {
  // Row-major fill order so the draw sequence matches reading the matrix row by row.
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = uniform(lo, hi);
  return m;
}

Vector SeededRng::unit_vector(Eigen::Index n) {
  if (n == 0) throw std::invalid_argument("unit_vector: zero dimension");
  for (;;) {
    Vector v = normal_vector(n);
    const double len = v.norm();
    if (len > 1e-300) return v / len;
  }
}

SeededRng SeededRng::substream(std::uint64_t key, std::uint64_t role) const {
  const std::uint64_t id = splitmix64(stream_id_ ^ splitmix64(key ^ splitmix64(role + 1)));
  return SeededRng(seed_, id);
}

}  // namespace holder_opt
