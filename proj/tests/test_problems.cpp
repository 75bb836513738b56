#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <Eigen/QR>

#include "holder_opt/problems.hpp"
#include "oracles.hpp"

using namespace holder_opt;

namespace {

double max_rel_fd_error(const CompositeProblem& p, const Vector& x, double h = 1e-6) {
  const Vector g = p.f_grad(x);
  Vector fd(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    fd[i] = (p.f_value(xp) - p.f_value(xm)) / (2 * h);
  }
  return (fd - g).norm() / std::max(1e-12, std::max(g.norm(), fd.norm()));
}

void check_midpoint_convexity(const CompositeProblem& p, SeededRng& rng, double scale) {
  for (int i = 0; i < 1000; ++i) {
    Vector x = p.g.prox(oracle::random_vector(rng, static_cast<int>(p.dim), scale), 1.0);
    Vector y = p.g.prox(oracle::random_vector(rng, static_cast<int>(p.dim), scale), 1.0);
    const double mid = p.f_value(0.5 * (x + y));
    CHECK(mid <= 0.5 * (p.f_value(x) + p.f_value(y)) + 1e-9);
  }
}

void check_subgradient_inequality(const CompositeProblem& p, SeededRng& rng, double scale) {
  for (int i = 0; i < 1000; ++i) {
    const Vector x = oracle::random_vector(rng, static_cast<int>(p.dim), scale);
    const Vector y = oracle::random_vector(rng, static_cast<int>(p.dim), scale);
    CHECK(p.f_value(y) >= p.f_value(x) + p.f_grad(x).dot(y - x) - 1e-9);
  }
}

}  // namespace

TEST_CASE("softmax shift makes zero the minimizer") {
  const auto p = make_softmax(60, 30, 0.05, 3);
  CHECK(p.f_grad(Vector::Zero(30)).norm() <= 1e-8);
  REQUIRE(p.known_min_value);
  CHECK(*p.known_min_value == p.f_value(Vector::Zero(30)));
  CHECK(p.x0 == Vector::Ones(30));
  CHECK_FALSE(p.g.is_indicator());
}

TEST_CASE("softmax minimum value is mu log sum exp(-b / mu)") {
  SeededRng rng(1);
  const Matrix A = rng.uniform_matrix(5, 3, -1, 1);
  const Vector b = rng.uniform_vector(5, -1, 1);
  const double mu = 0.1;
  const auto p = make_softmax(A, b, mu);
  double s = 0.0;
  for (int i = 0; i < 5; ++i) s += std::exp(-b[i] / mu);
  CHECK(*p.known_min_value == doctest::Approx(mu * std::log(s)).epsilon(1e-13));
}

TEST_CASE("softmax with tiny mu does not overflow") {
  const auto p = make_softmax(1000, 20, 0.005, 4);
  const Vector x = Vector::Constant(20, 3.0);
  CHECK(std::isfinite(p.f_value(x)));
  CHECK(p.f_grad(x).allFinite());
}

TEST_CASE("softmax gradient matches central differences") {
  const auto p = make_softmax(80, 40, 0.05, 7);
  SeededRng rng(8);
  for (int i = 0; i < 10; ++i) CHECK(max_rel_fd_error(p, rng.uniform_vector(40, -1, 1)) <= 1e-5);
}

TEST_CASE("softmax is midpoint convex") {
  const auto p = make_softmax(50, 10, 0.2, 9);
  SeededRng rng(10);
  check_midpoint_convexity(p, rng, 3.0);
}

TEST_CASE("2x2 matrix game has value zero at the mixed equilibrium") {
  Matrix A(2, 2);
  A << 0, 1, 1, 0;
  const auto p = make_matrix_game(A);
  Vector z(4);
  z << 0.5, 0.5, 0.5, 0.5;
  CHECK(std::abs(p.f_value(z)) <= 1e-15);
  Vector pure(4);
  pure << 1, 0, 1, 0;
  CHECK(p.f_value(pure) == doctest::Approx(1.0));
  CHECK(p.known_min_value == 0.0);
}

TEST_CASE("zero payoff gives zero gap everywhere") {
  const auto p = make_matrix_game(Matrix::Zero(3, 4));
  SeededRng rng(2);
  for (int i = 0; i < 50; ++i) CHECK(p.f_value(p.g.prox(rng.uniform_vector(7, -1, 1), 1.0)) == 0.0);
}

TEST_CASE("matrix game gap is nonnegative on feasible pairs") {
  const auto p = make_matrix_game(12, 7, 5);
  SeededRng rng(6);
  for (int i = 0; i < 1000; ++i) {
    const Vector z = p.g.prox(rng.uniform_vector(19, -1, 1), 1.0);
    CHECK(p.f_value(z) >= -1e-12);
  }
}

TEST_CASE("matrix game subgradient breaks ties at the lowest index") {
  Matrix A(2, 3);
  A << 1, 1, 0, 1, 1, 0;
  const auto p = make_matrix_game(A);
  Vector z(5);
  z << 0.5, 0.5, 1.0 / 3, 1.0 / 3, 1.0 / 3;
  const Vector g = p.f_grad(z);
  // Columns 0 and 1 tie for the max; rows 0 and 1 tie for the min.
  CHECK(g[0] == A(0, 0));
  CHECK(g[1] == A(1, 0));
  CHECK(g.tail(3) == -A.row(0).transpose());
}

TEST_CASE("matrix game subgradient inequality on the product of simplices") {
  const auto p = make_matrix_game(10, 6, 11);
  SeededRng rng(12);
  for (int i = 0; i < 1000; ++i) {
    const Vector x = p.g.prox(rng.uniform_vector(16, -1, 1), 1.0);
    const Vector y = p.g.prox(rng.uniform_vector(16, -1, 1), 1.0);
    CHECK(p.f_value(y) >= p.f_value(x) + p.f_grad(x).dot(y - x) - 1e-9);
  }
}

TEST_CASE("least squares ball basics") {
  const auto data = make_regression_data(50, 20, 1);
  const auto p = make_least_squares_ball(data.A, data.b, 10.0);
  CHECK(p.x0 == Vector::Zero(20));
  CHECK(p.g.is_indicator());
  SeededRng rng(2);
  CHECK(max_rel_fd_error(p, rng.uniform_vector(20, -1, 1), 1e-5) <= 1e-5);
  check_midpoint_convexity(p, rng, 20.0);
}

TEST_CASE("least squares exact minimizer satisfies the ball KKT conditions") {
  const auto data = make_regression_data(50, 20, 1);
  const auto p = make_least_squares_ball(data.A, data.b, 10.0);
  REQUIRE(p.known_minimizer);
  const Vector& x = *p.known_minimizer;
  // x_true is uniform on [-5, 5]^20, so the constraint is active.
  CHECK(x.norm() == doctest::Approx(10.0).epsilon(1e-10));
  // -grad f(x) must point along the outward normal x.
  const Vector g = p.f_grad(x);
  const double lambda = -g.dot(x) / x.squaredNorm();
  CHECK(lambda > 0.0);
  CHECK((g + lambda * x).norm() <= 1e-8 * std::max(1.0, g.norm()));
  // No feasible random point does better.
  SeededRng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const Vector y = p.g.prox(x + rng.uniform_vector(20, -0.5, 0.5), 1.0);
    CHECK(p.f_value(y) >= *p.known_min_value - 1e-9);
  }
}

TEST_CASE("least squares minimizer inside the ball is the unconstrained solution") {
  SeededRng rng(4);
  const Matrix A = rng.uniform_matrix(30, 4, -1, 1);
  const Vector b = rng.uniform_vector(30, -1, 1);
  const auto p = make_least_squares_ball(A, b, 100.0);
  const Vector unconstrained = A.colPivHouseholderQr().solve(b);
  CHECK((*p.known_minimizer - unconstrained).norm() <= 1e-9);
}

TEST_CASE("gaussian noise with sigma zero is the exact gradient") {
  const auto data = make_regression_data(20, 5, 3);
  const auto p = make_least_squares_ball(data.A, data.b, 10.0, noise::Gaussian{0.0});
  SeededRng rng(4);
  const Vector x = rng.uniform_vector(5, -1, 1);
  CHECK(p.f_stoch_grad(x, rng) == p.f_grad(x));
}

TEST_CASE("row sampled gradient mean is within three standard errors") {
  const auto data = make_regression_data(40, 6, 5);
  const auto p = make_least_squares_ball(data.A, data.b, 10.0, noise::RowSampling{4});
  SeededRng rng(6);
  const Vector x = rng.uniform_vector(6, -2, 2);
  const int draws = 10000;
  Vector sum = Vector::Zero(6), sq = Vector::Zero(6);
  for (int i = 0; i < draws; ++i) {
    const Vector g = p.f_stoch_grad(x, rng);
    sum += g;
    sq += g.cwiseProduct(g);
  }
  const Vector mean = sum / draws;
  const Vector stddev = (sq / draws - mean.cwiseProduct(mean)).cwiseSqrt();
  const Vector exact = p.f_grad(x);
  for (int i = 0; i < 6; ++i) CHECK(std::abs(mean[i] - exact[i]) <= 3.0 * stddev[i] / 100.0);
}

TEST_CASE("gaussian noise is unbiased with the requested variance") {
  const auto p = with_gaussian_noise(make_quadratic(Vector::Ones(3)), 0.5);
  SeededRng rng(7);
  const Vector x = Vector::Zero(3);
  Vector sum = Vector::Zero(3);
  double sq = 0.0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) {
    const Vector e = p.f_stoch_grad(x, rng) - p.f_grad(x);
    sum += e;
    sq += e.squaredNorm();
  }
  CHECK((sum / draws).norm() <= 0.02);
  CHECK(sq / draws / 3.0 == doctest::Approx(0.25).epsilon(0.03));
}

TEST_CASE("lp regression subgradients") {
  SeededRng rng(8);
  const Matrix A = rng.uniform_matrix(15, 4, -1, 1);
  const Vector b = rng.uniform_vector(15, -1, 1);
  const Vector x = rng.uniform_vector(4, -1, 1);
  const Vector r = A * x - b;

  const auto p2 = make_lp_regression(A, b, 2.0);
  CHECK((p2.f_grad(x) - A.transpose() * r / r.norm()).norm() <= 1e-12);
  CHECK(p2.f_value(x) == doctest::Approx(r.norm()));

  const auto p1 = make_lp_regression(A, b, 1.0);
  Vector sign(15);
  for (int i = 0; i < 15; ++i) sign[i] = r[i] > 0 ? 1.0 : -1.0;
  CHECK((p1.f_grad(x) - A.transpose() * sign).norm() <= 1e-12);
  CHECK(p1.f_value(x) == doctest::Approx(r.lpNorm<1>()));

  const auto p15 = make_lp_regression(A, b, 1.5);
  check_subgradient_inequality(p15, rng, 2.0);
  check_subgradient_inequality(p1, rng, 2.0);
  check_midpoint_convexity(p15, rng, 2.0);
  CHECK(max_rel_fd_error(p15, x) <= 1e-5);
}

TEST_CASE("lp regression at zero residual returns a zero subgradient") {
  Matrix A = Matrix::Identity(3, 3);
  const Vector b = Vector::Ones(3);
  const auto p = make_lp_regression(A, b, 1.5);
  CHECK(p.f_grad(b) == Vector::Zero(3));
  CHECK(p.f_value(b) == 0.0);
  CHECK_THROWS_AS(make_lp_regression(A, b, 2.5), std::invalid_argument);
  const auto ball = make_lp_regression(A, b, 1.5, 2.0);
  CHECK(ball.g.is_indicator());
}

TEST_CASE("quadratic problem") {
  Vector c(3), h(3);
  c << 1, -2, 0.5;
  h << 1, 0.1, 0;
  const auto p = make_quadratic(c, h);
  CHECK(p.f_value(c) == 0.0);
  CHECK(p.known_minimizer == c);
  CHECK(max_rel_fd_error(p, Vector::Zero(3)) <= 1e-6);
  CHECK_THROWS_AS(make_quadratic(c, Vector::Ones(2)), DimensionError);
}

TEST_CASE("hoelder estimates") {
  SeededRng rng(9);
  const auto quad = make_quadratic(Vector::Zero(4));
  const double e = estimate_holder(quad, Vector::Zero(4), 1.0, 1.0, 200, rng);
  CHECK(e <= 1.0 + 1e-12);
  CHECK(e >= 1.0 - 1e-9);

  const auto linear = make_quadratic(Vector::Zero(4), Vector::Zero(4));
  CHECK(estimate_holder(linear, Vector::Zero(4), 1.0, 0.0, 100, rng) == 0.0);

  SeededRng data(10);
  const Matrix A = data.uniform_matrix(30, 5, -1, 1);
  const Vector b = data.uniform_vector(30, -1, 1);
  const double mu = 0.05;
  const auto soft = make_softmax(A, b, mu);
  // The shifted rows are what the gradient sees; bound with them.
  const Vector w0 = [&] {
    Vector z = -b / mu;
    Vector w = (z.array() - z.maxCoeff()).exp().matrix();
    return Vector(w / w.sum());
  }();
  const Matrix shifted = A.rowwise() - (A.transpose() * w0).transpose();
  const double bound = shifted.rowwise().squaredNorm().maxCoeff() * 30 / mu;
  const double est = estimate_holder(soft, Vector::Zero(5), 1.0, 1.0, 400, rng);
  CHECK(est >= 0.0);
  CHECK(est <= bound);
  CHECK_THROWS(estimate_holder(quad, Vector::Zero(4), 1.0, 1.0, 1, rng));
}

TEST_CASE("generators are deterministic in the seed") {
  const auto a = make_regression_data(10, 3, 42);
  const auto b = make_regression_data(10, 3, 42);
  CHECK(a.A == b.A);
  CHECK(a.b == b.b);
  const auto c = make_regression_data(10, 3, 43);
  CHECK_FALSE(a.A == c.A);
  const auto g1 = make_matrix_game(4, 5, 1);
  const auto g2 = make_matrix_game(4, 5, 1);
  const Vector z = g1.x0;
  CHECK(g1.f_grad(z) == g2.f_grad(z));
}
