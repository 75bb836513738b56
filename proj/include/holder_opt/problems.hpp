#pragma once

#include <cstdint>
#include <optional>
#include <variant>

#include "holder_opt/problem.hpp"

namespace holder_opt {

// Stochastic-oracle models for sum-of-rows objectives.
namespace noise {
struct None {};
// Unbiased minibatch gradient from B rows drawn uniformly with replacement.
struct RowSampling {
  Eigen::Index batch;
};
// Exact gradient plus sigma times a standard normal vector.
struct Gaussian {
  double sigma;
};
}  // namespace noise
using NoiseMode = std::variant<noise::None, noise::RowSampling, noise::Gaussian>;

/// mu * log sum_i exp((<a_i, x> - b_i) / mu), rows shifted so that x = 0 is
/// the global minimizer. Entries of the raw rows and of b are uniform on
/// [-1, 1]. Starts from the all-ones vector.
CompositeProblem make_softmax(Eigen::Index n, Eigen::Index d, double mu, std::uint64_t seed);
CompositeProblem make_softmax(Matrix A, Vector b, double mu);

/// Joint primal-dual gap of min_x max_y <x, A y> over the product of simplices.
/// Starts from the pair of uniform strategies.
CompositeProblem make_matrix_game(Eigen::Index n, Eigen::Index m, std::uint64_t seed);
CompositeProblem make_matrix_game(Matrix A);

/// 0.5 * ||A x - b||^2 subject to ||x|| <= radius. Starts from 0; the
/// minimizer is computed exactly.
CompositeProblem make_least_squares_ball(Matrix A, Vector b, double radius,
                                         NoiseMode noise_mode = noise::None{});

// Minimizer of 0.5 * ||A x - b||^2 over the ball, via the eigendecomposition of
// A^T A and bisection on the multiplier.
Vector least_squares_ball_minimizer(const Matrix& A, const Vector& b, double radius);

struct RegressionData {
  Matrix A;
  Vector b;
};
// A uniform on [-1, 1]; b = A * x_true + uniform [-1, 1] residual where
// x_true has entries uniform on [-5, 5].
RegressionData make_regression_data(Eigen::Index n, Eigen::Index d, std::uint64_t seed);

/// ||A x - b||_p with p in [1, 2]; unconstrained unless a radius is given.
/// Starts from 0.
CompositeProblem make_lp_regression(Matrix A, Vector b, double p,
                                    std::optional<double> radius = std::nullopt);

/// 0.5 * sum_i h_i (x_i - c_i)^2 with h = 1 when no curvature is given. Starts from 0.
CompositeProblem make_quadratic(Vector center, std::optional<Vector> curvature = std::nullopt);

/// Attaches an exact-gradient-plus-Gaussian oracle to any problem.
CompositeProblem with_gaussian_noise(CompositeProblem problem, double sigma);

/// Largest ||grad f(x) - grad f(y)|| / ||x - y||^nu over random pairs in the
/// ball around `center`. A lower bound on the local Hoelder constant; meant
/// for diagnostics and tests.
double estimate_holder(const CompositeProblem& problem, const Vector& center, double radius,
                       double nu, std::size_t samples, SeededRng& rng);

}  // namespace holder_opt
