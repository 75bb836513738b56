#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "holder_opt/prox.hpp"
#include "oracles.hpp"

using namespace holder_opt;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

void check_close(const Vector& a, const Vector& b, double tol = 1e-12) {
  REQUIRE(a.size() == b.size());
  CHECK((a - b).lpNorm<Eigen::Infinity>() <= tol);
}

}  // namespace

TEST_CASE("ball projection scales radially") {
  const auto ball = ProxOperator::ball(Vector::Zero(2), 1.0);
  check_close(ball.prox(vec({3, 4}), 1.0), vec({0.6, 0.8}));
  check_close(ball.prox(vec({0.3, -0.4}), 1.0), vec({0.3, -0.4}));
}

TEST_CASE("simplex projection examples") {
  const auto s = ProxOperator::simplex(2);
  check_close(s.prox(vec({0.25, 0.75}), 1.0), vec({0.25, 0.75}));
  check_close(s.prox(vec({1.0, 0.5}), 1.0), vec({0.75, 0.25}));
  check_close(project_simplex(vec({5, 5, 5})), vec({1.0 / 3, 1.0 / 3, 1.0 / 3}));
  check_close(project_simplex(vec({-3, 10, 0.2})), vec({0, 1, 0}));
}

TEST_CASE("l1 soft threshold") {
  const auto l1 = ProxOperator::l1(1.0);
  check_close(l1.prox(vec({2, -0.5}), 1.0), vec({1, 0}));
  check_close(l1.prox(vec({-3, 0.25}), 0.5), vec({-2.5, 0}));
  CHECK(l1.value(vec({2, -0.5})) == doctest::Approx(2.5));
  CHECK_THROWS_AS(l1.prox(vec({1, 1}), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(l1.prox(vec({1, 1}), -1.0), std::invalid_argument);
}

TEST_CASE("box clamps per coordinate") {
  const auto box = ProxOperator::box(vec({-1, 0}), vec({1, 2}));
  check_close(box.prox(vec({-5, 1}), 1.0), vec({-1, 1}));
  check_close(box.prox(vec({0.5, 7}), 1.0), vec({0.5, 2}));
}

TEST_CASE("product simplex projects blockwise") {
  const auto p = ProxOperator::product_simplex({2, 3});
  const Vector out = p.prox(vec({1.0, 0.5, 5, 5, 5}), 1.0);
  check_close(out.head(2), vec({0.75, 0.25}));
  check_close(out.tail(3), vec({1.0 / 3, 1.0 / 3, 1.0 / 3}));
  CHECK(p.feasible(out));
  CHECK(p.dim() == 5);
}

TEST_CASE("identity prox returns its input") {
  const auto id = ProxOperator::identity();
  check_close(id.prox(vec({1, -2, 3}), 5.0), vec({1, -2, 3}));
  CHECK(id.value(vec({1e9})) == 0.0);
  CHECK_FALSE(id.is_indicator());
  CHECK(std::isinf(id.diameter()));
}

TEST_CASE("invalid set parameters are rejected") {
  CHECK_THROWS_AS(ProxOperator::ball(Vector::Zero(2), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ProxOperator::ball(Vector::Zero(2), -1.0), std::invalid_argument);
  CHECK_THROWS_AS(ProxOperator::box(vec({1}), vec({0})), std::invalid_argument);
  CHECK_THROWS_AS(ProxOperator::l1(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(ProxOperator::simplex(0), std::invalid_argument);
  CHECK_THROWS_AS(ProxOperator::product_simplex({}), std::invalid_argument);
}

TEST_CASE("dimension mismatch and non-finite input are errors") {
  const auto s = ProxOperator::simplex(3);
  CHECK_THROWS_AS(s.prox(vec({1, 2}), 1.0), DimensionError);
  Vector bad = vec({1, 2, 3});
  bad[1] = std::nan("");
  CHECK_THROWS_AS(s.prox(bad, 1.0), std::invalid_argument);
}

TEST_CASE("indicator values use a feasibility tolerance") {
  const auto s = ProxOperator::simplex(2);
  CHECK(s.value(vec({0.5, 0.5 + 1e-10})) == 0.0);
  CHECK(std::isinf(s.value(vec({0.5, 0.6}))));
  const auto ball = ProxOperator::ball(Vector::Zero(2), 1.0);
  CHECK(ball.value(vec({1.0 + 1e-10, 0})) == 0.0);
  CHECK(std::isinf(ball.value(vec({1.1, 0}))));
}

TEST_CASE("interior, diameter and distance to domain") {
  const auto ball = ProxOperator::ball(Vector::Zero(2), 2.0);
  CHECK(ball.interior(vec({0.5, 0.5})));
  CHECK_FALSE(ball.interior(vec({2.0, 0.0})));
  CHECK(ball.diameter() == doctest::Approx(4.0));
  CHECK(ball.distance_to_domain(vec({3, 4})) == doctest::Approx(3.0));
  CHECK_FALSE(ProxOperator::simplex(3).interior(vec({1.0 / 3, 1.0 / 3, 1.0 / 3})));
  CHECK(ProxOperator::simplex(3).diameter() == doctest::Approx(std::sqrt(2.0)));
  const auto box = ProxOperator::box(vec({0, 0}), vec({3, 4}));
  CHECK(box.diameter() == doctest::Approx(5.0));
  CHECK(box.interior(vec({1, 1})));
  CHECK_FALSE(box.interior(vec({0, 1})));
}

TEST_CASE("dual averaging subproblem examples") {
  const auto ball = ProxOperator::ball(Vector::Zero(2), 1.0);
  check_close(dual_averaging_argmin(ball, Vector::Zero(2), vec({2, 0}), 1.0, 1.0), vec({-1, 0}));

  const auto id = ProxOperator::identity();
  check_close(dual_averaging_argmin(id, vec({1, 1}), vec({4, -2}), 3.0, 2.0), vec({-1, 2}));

  const auto simplex = ProxOperator::simplex(3);
  const Vector x0 = vec({0.2, 0.3, 0.5});
  check_close(dual_averaging_argmin(simplex, x0, Vector::Zero(3), 10.0, 7.0), x0);

  CHECK_THROWS_AS(dual_averaging_argmin(ball, Vector::Zero(2), vec({1, 0}), 1.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(dual_averaging_argmin(ball, Vector::Zero(2), vec({1, 0}), 1.0, -2.0),
                  std::invalid_argument);
}

TEST_CASE("dual averaging with l1 weight scales the threshold by gA / beta") {
  const auto l1 = ProxOperator::l1(1.0);
  // center = x0 - S / beta = (3, -0.5); threshold gA / beta = 1.
  check_close(dual_averaging_argmin(l1, Vector::Zero(2), vec({-6, 1}), 2.0, 2.0), vec({2, 0}));
  // gA = 0 leaves the unconstrained point.
  check_close(dual_averaging_argmin(l1, Vector::Zero(2), vec({-6, 1}), 0.0, 2.0), vec({3, -0.5}));
}

TEST_CASE("dual averaging first-order optimality on random instances") {
  SeededRng rng(2024);
  const int d = 5;
  std::vector<ProxOperator> ops = {
      ProxOperator::identity(), ProxOperator::ball(rng.uniform_vector(d, -1, 1), 1.5),
      ProxOperator::simplex(d), ProxOperator::box(Vector::Constant(d, -0.5), Vector::Constant(d, 0.7)),
      ProxOperator::l1(0.8)};
  for (const auto& op : ops) {
    for (int trial = 0; trial < 20; ++trial) {
      Vector x0 = op.prox(rng.uniform_vector(d, -1, 1), 1.0);
      const Vector S = rng.uniform_vector(d, -3, 3);
      const double beta = oracle::log_uniform(rng, 0.1, 10.0);
      const double gA = oracle::log_uniform(rng, 0.1, 10.0);
      const Vector v = dual_averaging_argmin(op, x0, S, gA, beta);
      for (int j = 0; j < 100; ++j) {
        const Vector y = op.prox(rng.uniform_vector(d, -2, 2), 1.0);
        const double residual = (S + beta * (v - x0)).dot(y - v) + gA * (op.value(y) - op.value(v));
        CHECK(residual >= -1e-8);
      }
    }
  }
}
