#include "holder_opt/problems.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <memory>
#include <stdexcept>
#include <string>

namespace holder_opt {

namespace {

struct LogSumExp {
  double value;
  Vector weights;  // softmax weights, summing to one
};

LogSumExp log_sum_exp(const Vector& z) {
  const double m = z.maxCoeff();
  Vector w = (z.array() - m).exp().matrix();
  const double total = w.sum();
  w /= total;
  return {m + std::log(total), std::move(w)};
}

// Ties go to the lowest index.
Eigen::Index argmax_lowest(const Vector& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

template <class T>
std::shared_ptr<const T> share(T value) {
  return std::make_shared<const T>(std::move(value));
}

void attach_noise(CompositeProblem& p, const std::shared_ptr<const Matrix>& A,
                  const std::shared_ptr<const Vector>& b, const NoiseMode& mode) {
  if (const auto* rows = std::get_if<noise::RowSampling>(&mode)) {
    if (rows->batch < 1) throw std::invalid_argument("row sampling: batch must be >= 1");
    const Eigen::Index batch = rows->batch;
    p.f_stoch_grad = [A, b, batch](const Vector& x, SeededRng& rng) {
      const Eigen::Index n = A->rows();
      Vector g = Vector::Zero(A->cols());
      for (Eigen::Index j = 0; j < batch; ++j) {
        const auto i = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
        g += A->row(i).transpose() * (A->row(i).dot(x) - (*b)[i]);
      }
      return Vector(g * (static_cast<double>(n) / static_cast<double>(batch)));
    };
    p.name += "+rows" + std::to_string(batch);
  } else if (const auto* gauss = std::get_if<noise::Gaussian>(&mode)) {
    p = with_gaussian_noise(std::move(p), gauss->sigma);
  }
}

}  // namespace

CompositeProblem make_softmax(Matrix A_raw, Vector b, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("softmax: mu must be positive");
  if (A_raw.rows() < 1 || A_raw.cols() < 1) throw std::invalid_argument("softmax: empty matrix");
  if (b.size() != A_raw.rows()) throw DimensionError("softmax: b must have one entry per row");

  // Shift a_i <- a_i - grad f_raw(0).
  const Vector w0 = log_sum_exp(-b / mu).weights;
  const Vector grad0 = A_raw.transpose() * w0;
  A_raw.rowwise() -= grad0.transpose();

  auto A = share(std::move(A_raw));
  auto bb = share(std::move(b));
  CompositeProblem p;
  p.name = "softmax";
  p.dim = A->cols();
  p.f_value = [A, bb, mu](const Vector& x) {
    return mu * log_sum_exp((*A * x - *bb) / mu).value;
  };
  p.f_grad = [A, bb, mu](const Vector& x) {
    return Vector(A->transpose() * log_sum_exp((*A * x - *bb) / mu).weights);
  };
  p.g = ProxOperator::identity();
  p.x0 = Vector::Ones(p.dim);
  p.known_minimizer = Vector::Zero(p.dim);
  p.known_min_value = p.f_value(Vector::Zero(p.dim));
  return p;
}

CompositeProblem make_softmax(Eigen::Index n, Eigen::Index d, double mu, std::uint64_t seed) {
  if (n < 1 || d < 1) throw std::invalid_argument("softmax: n and d must be >= 1");
  SeededRng rng(seed);
  Matrix A = rng.uniform_matrix(n, d, -1.0, 1.0);
  Vector b = rng.uniform_vector(n, -1.0, 1.0);
  return make_softmax(std::move(A), std::move(b), mu);
}

CompositeProblem make_matrix_game(Matrix payoff) {
  const Eigen::Index n = payoff.rows();
  const Eigen::Index m = payoff.cols();
  if (n < 1 || m < 1) throw std::invalid_argument("matrix game: empty payoff matrix");
  auto A = share(std::move(payoff));

  CompositeProblem p;
  p.name = "matrix_game";
  p.dim = n + m;
  // f(x, y) = max_j (A^T x)_j - min_i (A y)_i.
  p.f_value = [A, n, m](const Vector& z) {
    const Vector col_payoff = A->transpose() * z.head(n);
    const Vector row_payoff = *A * z.tail(m);
    return col_payoff.maxCoeff() - row_payoff.minCoeff();
  };
  p.f_grad = [A, n, m](const Vector& z) {
    const Vector col_payoff = A->transpose() * z.head(n);
    const Vector row_payoff = *A * z.tail(m);
    const Eigen::Index j_star = argmax_lowest(col_payoff);
    const Eigen::Index i_star = argmax_lowest(-row_payoff);
    Vector g(n + m);
    g.head(n) = A->col(j_star);
    g.tail(m) = -A->row(i_star).transpose();
    return g;
  };
  p.g = ProxOperator::product_simplex({n, m});
  p.x0.resize(n + m);
  p.x0.head(n).setConstant(1.0 / static_cast<double>(n));
  p.x0.tail(m).setConstant(1.0 / static_cast<double>(m));
  p.known_min_value = 0.0;
  return p;
}

CompositeProblem make_matrix_game(Eigen::Index n, Eigen::Index m, std::uint64_t seed) {
  if (n < 1 || m < 1) throw std::invalid_argument("matrix game: n and m must be >= 1");
  SeededRng rng(seed);
  return make_matrix_game(rng.uniform_matrix(n, m, -1.0, 1.0));
}

Vector least_squares_ball_minimizer(const Matrix& A, const Vector& b, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("least squares: radius must be positive");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(A.transpose() * A);
  const Vector& h = eig.eigenvalues();
  const Vector q = eig.eigenvectors().transpose() * (A.transpose() * b);
  const double floor = 1e-12 * std::max(1.0, h.maxCoeff());
  // Coordinates of (A^T A + lambda I)^+ A^T b in the eigenbasis.
  auto solve = [&](double lambda) {
    Vector c(h.size());
    for (Eigen::Index i = 0; i < h.size(); ++i)
      c[i] = h[i] + lambda > floor ? q[i] / (h[i] + lambda) : 0.0;
    return c;
  };
  Vector c = solve(0.0);
  if (c.norm() > radius) {
    double lo = 0.0;
    double hi = q.norm() / radius;
    while (solve(hi).norm() > radius) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (solve(mid).norm() > radius ? lo : hi) = mid;
    }
    c = solve(hi);
  }
  return eig.eigenvectors() * c;
}

CompositeProblem make_least_squares_ball(Matrix A_in, Vector b_in, double radius,
                                         NoiseMode noise_mode) {
  if (A_in.rows() != b_in.size()) throw DimensionError("least squares: A rows must match b");
  if (A_in.rows() < 1 || A_in.cols() < 1) throw std::invalid_argument("least squares: empty data");
  auto A = share(std::move(A_in));
  auto b = share(std::move(b_in));

  CompositeProblem p;
  p.name = "least_squares";
  p.dim = A->cols();
  p.f_value = [A, b](const Vector& x) { return 0.5 * (*A * x - *b).squaredNorm(); };
  p.f_grad = [A, b](const Vector& x) { return Vector(A->transpose() * (*A * x - *b)); };
  p.g = ProxOperator::ball(Vector::Zero(p.dim), radius);
  p.x0 = Vector::Zero(p.dim);
  p.known_minimizer = least_squares_ball_minimizer(*A, *b, radius);
  p.known_min_value = p.f_value(*p.known_minimizer);
  attach_noise(p, A, b, noise_mode);
  return p;
}

RegressionData make_regression_data(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  if (n < 1 || d < 1) throw std::invalid_argument("regression data: n and d must be >= 1");
  SeededRng rng(seed);
  RegressionData data;
  data.A = rng.uniform_matrix(n, d, -1.0, 1.0);
  const Vector x_true = rng.uniform_vector(d, -5.0, 5.0);
  data.b = data.A * x_true + rng.uniform_vector(n, -1.0, 1.0);
  return data;
}

CompositeProblem make_lp_regression(Matrix A_in, Vector b_in, double p_exp,
                                    std::optional<double> radius) {
  if (!(p_exp >= 1.0 && p_exp <= 2.0)) throw std::invalid_argument("lp regression: p must be in [1, 2]");
  if (A_in.rows() != b_in.size()) throw DimensionError("lp regression: A rows must match b");
  if (A_in.rows() < 1 || A_in.cols() < 1) throw std::invalid_argument("lp regression: empty data");
  auto A = share(std::move(A_in));
  auto b = share(std::move(b_in));

  CompositeProblem p;
  p.name = "lp_regression";
  p.dim = A->cols();
  p.f_value = [A, b, p_exp](const Vector& x) {
    const Vector r = *A * x - *b;
    if (p_exp == 1.0) return r.lpNorm<1>();
    if (p_exp == 2.0) return r.norm();
    return std::pow(r.array().abs().pow(p_exp).sum(), 1.0 / p_exp);
  };
  p.f_grad = [A, b, p_exp](const Vector& x) {
    const Vector r = *A * x - *b;
    Vector w(r.size());
    if (p_exp == 1.0) {
      for (Eigen::Index i = 0; i < r.size(); ++i) w[i] = r[i] > 0 ? 1.0 : (r[i] < 0 ? -1.0 : 0.0);
    } else {
      const double norm =
          p_exp == 2.0 ? r.norm() : std::pow(r.array().abs().pow(p_exp).sum(), 1.0 / p_exp);
      // Zero residual: x minimizes ||A x - b||_p, so 0 is a subgradient.
      if (norm == 0.0) return Vector(Vector::Zero(A->cols()));
      const double scale = std::pow(norm, p_exp - 1.0);
      for (Eigen::Index i = 0; i < r.size(); ++i)
        w[i] = std::copysign(std::pow(std::abs(r[i]), p_exp - 1.0), r[i]) / scale;
    }
    return Vector(A->transpose() * w);
  };
  p.g = radius ? ProxOperator::ball(Vector::Zero(p.dim), *radius) : ProxOperator::identity();
  p.x0 = Vector::Zero(p.dim);
  return p;
}

CompositeProblem make_quadratic(Vector center, std::optional<Vector> curvature) {
  if (center.size() < 1) throw std::invalid_argument("quadratic: empty center");
  Vector h = curvature ? std::move(*curvature) : Vector(Vector::Ones(center.size()));
  if (h.size() != center.size()) throw DimensionError("quadratic: curvature/center mismatch");
  if ((h.array() < 0.0).any()) throw std::invalid_argument("quadratic: curvature must be >= 0");
  auto c = share(std::move(center));
  auto hh = share(std::move(h));

  CompositeProblem p;
  p.name = "quadratic";
  p.dim = c->size();
  p.f_value = [c, hh](const Vector& x) {
    return 0.5 * (hh->array() * (x - *c).array().square()).sum();
  };
  p.f_grad = [c, hh](const Vector& x) { return Vector(hh->cwiseProduct(x - *c)); };
  p.g = ProxOperator::identity();
  p.x0 = Vector::Zero(p.dim);
  p.known_minimizer = *c;
  p.known_min_value = 0.0;
  return p;
}

CompositeProblem with_gaussian_noise(CompositeProblem problem, double sigma) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("gaussian noise: sigma must be >= 0");
  auto grad = problem.f_grad;
  problem.f_stoch_grad = [grad, sigma](const Vector& x, SeededRng& rng) {
    Vector g = grad(x);
    if (sigma > 0.0) g += sigma * rng.normal_vector(g.size());
    return g;
  };
  problem.name += "+gauss";
  return problem;
}

double estimate_holder(const CompositeProblem& problem, const Vector& center, double radius,
                       double nu, std::size_t samples, SeededRng& rng) {
  if (samples < 2) throw std::invalid_argument("estimate_holder: need at least 2 samples");
  const Eigen::Index d = center.size();
  auto draw = [&] {
    const double scale = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
    return Vector(center + scale * rng.unit_vector(d));
  };
  double best = 0.0;
  for (std::size_t s = 0; s + 1 < samples; s += 2) {
    const Vector x = draw();
    const Vector y = draw();
    const double dist = (x - y).norm();
    if (dist == 0.0) continue;
    const double ratio = (problem.f_grad(x) - problem.f_grad(y)).norm() / std::pow(dist, nu);
    best = std::max(best, ratio);
  }
  return best;
}

}  // namespace holder_opt
