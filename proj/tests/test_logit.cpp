#include <cmath>

#include <gtest/gtest.h>

#include "paydev/ml/logit.hpp"
#include "paydev/rng.hpp"

using namespace paydev;
using namespace paydev::ml;

namespace {

struct Problem {
  Eigen::MatrixXd x;
  std::vector<int> y;
};

Problem random_problem(Rng& rng, Eigen::Index n, Eigen::Index p, double noise) {
  Problem pr{Eigen::MatrixXd(n, p), std::vector<int>(static_cast<std::size_t>(n))};
  std::vector<double> beta(static_cast<std::size_t>(p));
  for (auto& b : beta) b = rng.uniform() * 2 - 1;
  for (Eigen::Index i = 0; i < n; ++i) {
    double eta = 0;
    for (Eigen::Index j = 0; j < p; ++j) {
      pr.x(i, j) = rng.uniform() * 4 - 2;
      eta += beta[static_cast<std::size_t>(j)] * pr.x(i, j);
    }
    pr.y[static_cast<std::size_t>(i)] = rng.uniform() < sigmoid(eta / noise) ? 1 : 0;
  }
  return pr;
}

// Two-parameter Newton in raw units, closed-form 2x2 solve.
std::pair<double, double> newton_1d(const std::vector<double>& x, const std::vector<int>& y) {
  double a = 0, b = 0;
  for (int it = 0; it < 200; ++it) {
    double g0 = 0, g1 = 0, h00 = 0, h01 = 0, h11 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double p = 1 / (1 + std::exp(-(a + b * x[i])));
      const double w = p * (1 - p);
      g0 += p - y[i];
      g1 += (p - y[i]) * x[i];
      h00 += w;
      h01 += w * x[i];
      h11 += w * x[i] * x[i];
    }
    const double det = h00 * h11 - h01 * h01;
    a -= (h11 * g0 - h01 * g1) / det;
    b -= (h00 * g1 - h01 * g0) / det;
  }
  return {a, b};
}

}  // namespace

TEST(LogitGradient, MatchesCentralDifferences) {
  Rng rng(31);
  const auto pr = random_problem(rng, 300, 10, 1.0);
  for (int point = 0; point < 20; ++point) {
    Eigen::VectorXd theta(11);
    for (auto& t : theta) t = rng.uniform() * 2 - 1;
    const double l2 = point % 2 ? 0.5 : 0.0;
    const Eigen::VectorXd g = logit_gradient(pr.x, pr.y, theta, l2);
    for (Eigen::Index k = 0; k < theta.size(); ++k) {
      const double h = 1e-5 * std::max(1.0, std::abs(theta[k]));
      Eigen::VectorXd up = theta, down = theta;
      up[k] += h;
      down[k] -= h;
      const double fd = (logit_loss(pr.x, pr.y, up, l2) - logit_loss(pr.x, pr.y, down, l2)) / (2 * h);
      EXPECT_LT(std::abs(fd - g[k]) / std::max(1.0, std::abs(g[k])), 1e-4) << "point " << point << " k " << k;
    }
  }
}

TEST(LogitFit, LossTraceIsMonotone) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pr = random_problem(rng, 150, 4, 0.7);
    const auto m = fit_logit(pr.x, pr.y);
    ASSERT_GE(m.loss_trace.size(), 2u);
    for (std::size_t i = 1; i < m.loss_trace.size(); ++i) EXPECT_LE(m.loss_trace[i], m.loss_trace[i - 1]);
    EXPECT_TRUE(m.converged);
  }
}

TEST(LogitFit, InterceptOnlyIsLogOdds) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Constant(10, 2, 3.0);
  const std::vector<int> y{1, 1, 1, 0, 0, 0, 0, 0, 0, 0};
  const auto m = fit_logit(x, y);
  EXPECT_NEAR(m.intercept, std::log(3.0 / 7.0), 1e-8);
  EXPECT_EQ(m.weights, (std::vector<double>{0, 0}));
  EXPECT_NEAR(predict_proba(m, x)[0], 0.3, 1e-8);
}

TEST(LogitFit, OneFeatureMatchesIndependentNewton) {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pr = random_problem(rng, 200, 1, 1.5);
    std::vector<double> raw(pr.y.size());
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = pr.x(static_cast<Eigen::Index>(i), 0) * 10 + 50;
    Eigen::MatrixXd x(static_cast<Eigen::Index>(raw.size()), 1);
    for (std::size_t i = 0; i < raw.size(); ++i) x(static_cast<Eigen::Index>(i), 0) = raw[i];
    LogitOptions opt;
    opt.l2 = 0;
    const auto m = fit_logit(x, pr.y, opt);
    const auto [a, b] = newton_1d(raw, pr.y);
    const auto p = predict_proba(m, x);
    for (std::size_t i = 0; i < raw.size(); ++i)
      EXPECT_NEAR(p[static_cast<Eigen::Index>(i)], 1 / (1 + std::exp(-(a + b * raw[i]))), 1e-7);
    EXPECT_NEAR(m.weights[0] / m.sds[0], b, 1e-6);
  }
}

TEST(LogitFit, SeparableDataStaysFinite) {
  Eigen::MatrixXd x(6, 1);
  x << 1, 2, 3, 4, 5, 6;
  const std::vector<int> y{0, 0, 0, 1, 1, 1};
  LogitOptions opt;
  opt.max_iter = 25;
  const auto m = fit_logit(x, y, opt);
  const auto p = predict_proba(m, x);
  EXPECT_TRUE(p.allFinite());
  EXPECT_LT(p[2], 0.5);
  EXPECT_GT(p[3], 0.5);
}
