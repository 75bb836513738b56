#include "holder_opt/prox.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

namespace holder_opt {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_dim(const Vector& z, Eigen::Index expected, const char* what) {
  if (expected >= 0 && z.size() != expected) {
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(expected) +
                         ", got " + std::to_string(z.size()));
  }
}

Vector soft_threshold(const Vector& z, double t) {
  Vector out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double a = std::abs(z[i]) - t;
    out[i] = a > 0.0 ? std::copysign(a, z[i]) : 0.0;
  }
  return out;
}

}  // namespace

ProxOperator ProxOperator::ball(Vector center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw std::invalid_argument("ball prox: radius must be positive and finite");
  if (!center.allFinite()) throw std::invalid_argument("ball prox: center must be finite");
  return ProxOperator(g_kind::Ball{std::move(center), radius});
}

ProxOperator ProxOperator::simplex(Eigen::Index dim) {
  if (dim < 1) throw std::invalid_argument("simplex prox: dimension must be >= 1");
  return ProxOperator(g_kind::Simplex{dim});
}

ProxOperator ProxOperator::product_simplex(std::vector<Eigen::Index> dims) {
  if (dims.empty()) throw std::invalid_argument("product_simplex prox: no blocks");
  for (auto d : dims)
    if (d < 1) throw std::invalid_argument("product_simplex prox: block dimension must be >= 1");
  return ProxOperator(g_kind::ProductSimplex{std::move(dims)});
}

ProxOperator ProxOperator::box(Vector lo, Vector hi) {
  if (lo.size() != hi.size()) throw DimensionError("box prox: lo/hi dimension mismatch");
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (std::isnan(lo[i]) || std::isnan(hi[i]) || lo[i] > hi[i])
      throw std::invalid_argument("box prox: lo > hi at component " + std::to_string(i));
  }
  return ProxOperator(g_kind::Box{std::move(lo), std::move(hi)});
}

ProxOperator ProxOperator::l1(double weight) {
  if (!(weight >= 0.0) || !std::isfinite(weight))
    throw std::invalid_argument("l1 prox: weight must be nonnegative and finite");
  return ProxOperator(g_kind::L1{weight});
}

bool ProxOperator::is_indicator() const {
  return std::visit(Overloaded{[](const g_kind::Identity&) { return false; },
                               [](const g_kind::L1&) { return false; },
                               [](const auto&) { return true; }},
                    kind_);
}

Eigen::Index ProxOperator::dim() const {
  return std::visit(
      Overloaded{[](const g_kind::Identity&) -> Eigen::Index { return -1; },
                 [](const g_kind::L1&) -> Eigen::Index { return -1; },
                 [](const g_kind::Ball& b) -> Eigen::Index { return b.center.size(); },
                 [](const g_kind::Simplex& s) -> Eigen::Index { return s.dim; },
                 [](const g_kind::ProductSimplex& p) -> Eigen::Index {
                   return std::accumulate(p.dims.begin(), p.dims.end(), Eigen::Index{0});
                 },
                 [](const g_kind::Box& b) -> Eigen::Index { return b.lo.size(); }},
      kind_);
}

void project_simplex_inplace(Eigen::Ref<Vector> z) {
  const Eigen::Index n = z.size();
  std::vector<double> sorted(z.data(), z.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  // Largest rho with sorted[rho] - (cumsum[rho] - 1) / (rho + 1) > 0.
  double cumsum = 0.0;
  double theta = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumsum += sorted[j];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - t > 0.0) theta = t;
  }
  for (Eigen::Index i = 0; i < n; ++i) z[i] = std::max(z[i] - theta, 0.0);
}

Vector project_simplex(const Vector& z) {
  Vector out = z;
  project_simplex_inplace(out);
  return out;
}

Vector ProxOperator::prox(const Vector& z, double lambda) const {
  if (!z.allFinite()) throw std::invalid_argument("prox: input must be finite");
  if (!is_indicator() && !(lambda > 0.0))
    throw std::invalid_argument("prox: lambda must be positive");
  require_dim(z, dim(), "prox");
  return std::visit(
      Overloaded{[&](const g_kind::Identity&) -> Vector { return z; },
                 [&](const g_kind::L1& l) -> Vector { return soft_threshold(z, lambda * l.weight); },
                 [&](const g_kind::Ball& b) -> Vector {
                   const Vector offset = z - b.center;
                   const double len = offset.norm();
                   if (len <= b.radius) return z;
                   return b.center + (b.radius / len) * offset;
                 },
                 [&](const g_kind::Simplex&) -> Vector { return project_simplex(z); },
                 [&](const g_kind::ProductSimplex& p) -> Vector {
                   Vector out = z;
                   Eigen::Index start = 0;
                   for (auto d : p.dims) {
                     project_simplex_inplace(out.segment(start, d));
                     start += d;
                   }
                   return out;
                 },
                 [&](const g_kind::Box& b) -> Vector { return z.cwiseMax(b.lo).cwiseMin(b.hi); }},
      kind_);
}

bool ProxOperator::feasible(const Vector& x, double tol) const {
  if (dim() >= 0 && x.size() != dim()) return false;
  if (!x.allFinite()) return false;
  return std::visit(
      Overloaded{[&](const g_kind::Identity&) { return true; },
                 [&](const g_kind::L1&) { return true; },
                 [&](const g_kind::Ball& b) { return (x - b.center).norm() <= b.radius + tol; },
                 [&](const g_kind::Simplex&) {
                   return x.minCoeff() >= -tol && std::abs(x.sum() - 1.0) <= tol;
                 },
                 [&](const g_kind::ProductSimplex& p) {
                   Eigen::Index start = 0;
                   for (auto d : p.dims) {
                     const auto seg = x.segment(start, d);
                     if (seg.minCoeff() < -tol || std::abs(seg.sum() - 1.0) > tol) return false;
                     start += d;
                   }
                   return true;
                 },
                 [&](const g_kind::Box& b) {
                   return (x.array() >= b.lo.array() - tol).all() &&
                          (x.array() <= b.hi.array() + tol).all();
                 }},
      kind_);
}

double ProxOperator::value(const Vector& x) const {
  if (const auto* l = std::get_if<g_kind::L1>(&kind_)) return l->weight * x.lpNorm<1>();
  if (!is_indicator()) return 0.0;
  return feasible(x) ? 0.0 : kInf;
}

bool ProxOperator::interior(const Vector& x, double rel_margin) const {
  if (dim() >= 0 && x.size() != dim()) return false;
  return std::visit(
      Overloaded{[&](const g_kind::Identity&) { return true; },
                 [&](const g_kind::L1&) { return true; },
                 [&](const g_kind::Ball& b) {
                   return (x - b.center).norm() < b.radius * (1.0 - rel_margin);
                 },
                 // Simplices have empty interior in the ambient space.
                 [&](const g_kind::Simplex&) { return false; },
                 [&](const g_kind::ProductSimplex&) { return false; },
                 [&](const g_kind::Box& b) {
                   for (Eigen::Index i = 0; i < x.size(); ++i) {
                     const double margin = rel_margin * (b.hi[i] - b.lo[i]);
                     if (!(x[i] > b.lo[i] + margin && x[i] < b.hi[i] - margin)) return false;
                   }
                   return true;
                 }},
      kind_);
}

double ProxOperator::diameter() const {
  return std::visit(
      Overloaded{[](const g_kind::Identity&) { return kInf; },
                 [](const g_kind::L1&) { return kInf; },
                 [](const g_kind::Ball& b) { return 2.0 * b.radius; },
                 [](const g_kind::Simplex& s) { return s.dim > 1 ? std::sqrt(2.0) : 0.0; },
                 [](const g_kind::ProductSimplex& p) {
                   double sq = 0.0;
                   for (auto d : p.dims) sq += d > 1 ? 2.0 : 0.0;
                   return std::sqrt(sq);
                 },
                 [](const g_kind::Box& b) { return (b.hi - b.lo).norm(); }},
      kind_);
}

double ProxOperator::distance_to_domain(const Vector& x) const {
  if (!is_indicator()) return 0.0;
  return (prox(x, 1.0) - x).norm();
}

Vector dual_averaging_argmin(const ProxOperator& op, const Vector& x0, const Vector& S, double gA,
                             double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("dual_averaging_argmin: beta must be positive");
  if (x0.size() != S.size()) throw DimensionError("dual_averaging_argmin: x0/S dimension mismatch");
  const Vector center = x0 - S / beta;
  if (op.is_indicator()) return op.prox(center, 1.0);
  const double lambda = gA / beta;
  // gA == 0 means g carries no weight yet: the minimizer is the unconstrained point.
  if (!(lambda > 0.0)) return center;
  return op.prox(center, lambda);
}

}  // namespace holder_opt
