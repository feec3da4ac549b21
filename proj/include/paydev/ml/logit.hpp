#pragma once

// Binary logistic regression on z-scored features, fitted by damped Newton
// iterations with backtracking line search. The objective is
//
//   sum_i [ log(1 + exp(eta_i)) - y_i * eta_i ] + (l2 / 2) * |w|^2,
//   eta_i = b + w . z_i
//
// with the intercept b left unpenalized.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace paydev::ml {

struct LogitOptions {
  double l2 = 1e-8;
  int max_iter = 100;
  double tol = 1e-8;  // on the gradient norm
};

struct LogitModel {
  std::vector<double> means;
  std::vector<double> sds;
  std::vector<double> weights;  // per standardized column
  double intercept = 0;
  // Fit diagnostics.
  int iterations = 0;
  bool converged = false;
  std::vector<double> loss_trace;  // objective after each line-search step, starting point first
};

inline double sigmoid(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// log(1 + exp(t)) without overflow.
inline double softplus(double t) { return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

// Parameter vector layout: theta[0] = intercept, theta[1..p] = weights.
inline double logit_loss(const Eigen::MatrixXd& z, std::span<const int> y, const Eigen::VectorXd& theta,
                         double l2) {
  const Eigen::VectorXd eta = (z * theta.tail(z.cols())).array() + theta[0];
  double loss = 0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) loss += softplus(eta[i]) - y[static_cast<std::size_t>(i)] * eta[i];
  return loss + 0.5 * l2 * theta.tail(z.cols()).squaredNorm();
}

inline Eigen::VectorXd logit_gradient(const Eigen::MatrixXd& z, std::span<const int> y,
                                      const Eigen::VectorXd& theta, double l2) {
  const Eigen::Index p = z.cols();
  const Eigen::VectorXd eta = (z * theta.tail(p)).array() + theta[0];
  Eigen::VectorXd r(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) r[i] = sigmoid(eta[i]) - y[static_cast<std::size_t>(i)];
  Eigen::VectorXd g(p + 1);
  g[0] = r.sum();
  g.tail(p) = z.transpose() * r + l2 * theta.tail(p);
  return g;
}

inline Eigen::MatrixXd logit_hessian(const Eigen::MatrixXd& z, const Eigen::VectorXd& theta, double l2) {
  const Eigen::Index n = z.rows(), p = z.cols();
  Eigen::MatrixXd a(n, p + 1);
  a.col(0).setOnes();
  a.rightCols(p) = z;
  const Eigen::VectorXd eta = (z * theta.tail(p)).array() + theta[0];
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = sigmoid(eta[i]);
    w[i] = s * (1 - s);
  }
  Eigen::MatrixXd h = a.transpose() * w.asDiagonal() * a;
  h.diagonal().tail(p).array() += l2;
  return h;
}

inline Eigen::MatrixXd standardize(const Eigen::MatrixXd& x, const std::vector<double>& means,
                                   const std::vector<double>& sds) {
  Eigen::MatrixXd z(x.rows(), x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c)
    z.col(c) = (x.col(c).array() - means[static_cast<std::size_t>(c)]) / sds[static_cast<std::size_t>(c)];
  return z;
}

inline LogitModel fit_logit(const Eigen::MatrixXd& x, std::span<const int> y, const LogitOptions& opt = {}) {
  const Eigen::Index n = x.rows(), p = x.cols();
  LogitModel m;
  for (Eigen::Index c = 0; c < p; ++c) {
    const double mean = x.col(c).mean();
    const double var = n > 1 ? (x.col(c).array() - mean).square().sum() / static_cast<double>(n - 1) : 0.0;
    const double sd = std::sqrt(var);
    m.means.push_back(mean);
    m.sds.push_back(sd > 0 && std::isfinite(sd) ? sd : 1.0);  // constant column: weight stays 0
  }
  const Eigen::MatrixXd z = standardize(x, m.means, m.sds);

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p + 1);
  double loss = logit_loss(z, y, theta, opt.l2);
  m.loss_trace.push_back(loss);

  for (int it = 0; it < opt.max_iter; ++it) {
    const Eigen::VectorXd g = logit_gradient(z, y, theta, opt.l2);
    if (g.norm() <= opt.tol) {
      m.converged = true;
      break;
    }
    Eigen::VectorXd step = -g;
    bool is_newton = false;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(logit_hessian(z, theta, opt.l2));
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      const Eigen::VectorXd newton = -ldlt.solve(g);
      if (newton.allFinite() && newton.dot(g) < 0) {
        step = newton;
        is_newton = true;
      }
    }
    const double slope = g.dot(step);
    // The Newton decrement bounds the remaining decrease. Below the loss's
    // floating-point resolution the line search cannot tell steps apart, so
    // take full Newton steps while they shrink the gradient.
    if (is_newton && -slope <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(loss))) {
      const Eigen::VectorXd cand = theta + step;
      m.iterations = it + 1;
      if (logit_gradient(z, y, cand, opt.l2).norm() < g.norm()) {
        theta = cand;
        loss = std::min(loss, logit_loss(z, y, theta, opt.l2));
        continue;
      }
      m.converged = true;
      break;
    }
    // Armijo backtracking.
    double t = 1.0;
    bool accepted = false;
    for (int k = 0; k < 60; ++k, t *= 0.5) {
      const Eigen::VectorXd cand = theta + t * step;
      const double cand_loss = logit_loss(z, y, cand, opt.l2);
      if (std::isfinite(cand_loss) && cand_loss <= loss + 1e-4 * t * slope) {
        theta = cand;
        loss = cand_loss;
        accepted = true;
        break;
      }
    }
    m.iterations = it + 1;
    if (!accepted) {
      // No decrease possible at machine precision.
      m.converged = g.norm() <= std::sqrt(opt.tol);
      break;
    }
    m.loss_trace.push_back(loss);
  }
  if (!m.converged && m.iterations < opt.max_iter)
    m.converged = logit_gradient(z, y, theta, opt.l2).norm() <= opt.tol;

  m.intercept = theta[0];
  m.weights.assign(theta.data() + 1, theta.data() + 1 + p);
  return m;
}

inline Eigen::VectorXd predict_proba(const LogitModel& m, const Eigen::MatrixXd& x) {
  const Eigen::MatrixXd z = standardize(x, m.means, m.sds);
  const Eigen::Map<const Eigen::VectorXd> w(m.weights.data(), static_cast<Eigen::Index>(m.weights.size()));
  const Eigen::VectorXd eta = (z * w).array() + m.intercept;
  return eta.unaryExpr([](double t) { return sigmoid(t); });
}

}  // namespace paydev::ml
