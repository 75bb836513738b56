#pragma once

#include <variant>
#include <vector>

#include "holder_opt/core.hpp"

namespace holder_opt {

// Composite terms g with a closed-form scaled prox.
namespace g_kind {
struct Identity {};
struct Ball {
  Vector center;
  double radius;
};
struct Simplex {
  Eigen::Index dim;
};
struct ProductSimplex {
  std::vector<Eigen::Index> dims;
};
struct Box {
  Vector lo;
  Vector hi;
};
struct L1 {
  double weight;
};
}  // namespace g_kind

/// Tolerance used when an indicator is evaluated at an iterate.
inline constexpr double kFeasibilityTol = 1e-9;

class ProxOperator {
 public:
  using Kind = std::variant<g_kind::Identity, g_kind::Ball, g_kind::Simplex,
                            g_kind::ProductSimplex, g_kind::Box, g_kind::L1>;

  ProxOperator() : kind_(g_kind::Identity{}) {}

  static ProxOperator identity() { return ProxOperator(); }
  static ProxOperator ball(Vector center, double radius);
  static ProxOperator simplex(Eigen::Index dim);
  static ProxOperator product_simplex(std::vector<Eigen::Index> dims);
  static ProxOperator box(Vector lo, Vector hi);
  static ProxOperator l1(double weight);

  const Kind& kind() const { return kind_; }
  bool is_indicator() const;
  // Dimension the operator is bound to, or -1 when it accepts any size.
  Eigen::Index dim() const;

  // argmin_y { lambda * g(y) + 0.5 * ||y - z||^2 }.
  Vector prox(const Vector& z, double lambda) const;
  // g(x); indicators return 0 within kFeasibilityTol and +inf otherwise.
  double value(const Vector& x) const;
  bool feasible(const Vector& x, double tol = kFeasibilityTol) const;
  // True when x lies in the interior of dom g with the given relative margin.
  bool interior(const Vector& x, double rel_margin = 1e-9) const;
  // Diameter of dom g, +inf when unbounded.
  double diameter() const;
  // Euclidean distance from x to dom g.
  double distance_to_domain(const Vector& x) const;

 private:
  explicit ProxOperator(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

/// Sort-and-threshold Euclidean projection onto the unit simplex.
Vector project_simplex(const Vector& z);
void project_simplex_inplace(Eigen::Ref<Vector> z);

/// argmin_y { <S, y> + gA * g(y) + (beta / 2) * ||y - x0||^2 }.
Vector dual_averaging_argmin(const ProxOperator& op, const Vector& x0, const Vector& S, double gA,
                             double beta);

}  // namespace holder_opt
