#pragma once

// Random forest of fully grown CART trees. Tree t draws its bootstrap sample
// and its per-node feature subsets from Rng(derive_seed(seed, {t})), so the
// model depends only on (data, options) and not on the worker count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <numeric>
#include <span>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "paydev/ml/tree.hpp"
#include "paydev/rng.hpp"

namespace paydev::ml {

struct ForestOptions {
  int trees = 500;
  int mtry = 0;  // 0 = floor(sqrt(p))
  std::uint64_t seed = 1;
  bool bootstrap = true;
  int minsplit = 2;
  int maxdepth = 30;
  int threads = 1;  // 0 = hardware concurrency
};

struct ForestModel {
  std::vector<TreeModel> trees;
  std::vector<std::uint64_t> tree_seeds;
  int mtry = 1;
  std::uint64_t seed = 0;
  bool bootstrap = true;
};

inline int resolve_mtry(int mtry, std::size_t p) {
  if (mtry > 0) return std::min<int>(mtry, static_cast<int>(p));
  return std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(p)))));
}

inline ForestModel fit_forest(const Eigen::MatrixXd& x, std::span<const int> y, const ForestOptions& opt = {}) {
  const auto n = static_cast<std::size_t>(x.rows());
  const auto p = static_cast<std::size_t>(x.cols());
  ForestModel f;
  f.mtry = resolve_mtry(opt.mtry, p);
  f.seed = opt.seed;
  f.bootstrap = opt.bootstrap;
  const auto count = static_cast<std::size_t>(std::max(1, opt.trees));
  f.trees.resize(count);
  f.tree_seeds.resize(count);
  for (std::size_t t = 0; t < count; ++t) f.tree_seeds[t] = derive_seed(opt.seed, {t});

  TreeOptions topt;
  topt.minsplit = opt.minsplit;
  topt.cp = 0;
  topt.maxdepth = opt.maxdepth;
  topt.mtry = f.mtry;

  auto build = [&](std::size_t t) {
    Rng rng(f.tree_seeds[t]);
    std::vector<std::size_t> rows(n);
    if (opt.bootstrap) {
      for (auto& r : rows) r = rng.below(n);
      std::sort(rows.begin(), rows.end());
    } else {
      std::iota(rows.begin(), rows.end(), 0);
    }
    f.trees[t] = grow_tree(x, y, std::move(rows), topt, &rng);
  };

  std::size_t workers = opt.threads > 0 ? static_cast<std::size_t>(opt.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t t = 0; t < count; ++t) build(t);
    return f;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t t; (t = next.fetch_add(1)) < count;) build(t);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return f;
}

inline Eigen::VectorXd predict_proba(const ForestModel& f, const Eigen::MatrixXd& x) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(x.rows());
  for (const auto& t : f.trees)
    for (Eigen::Index r = 0; r < x.rows(); ++r) p[r] += t.predict_row(x.row(r));
  return p / static_cast<double>(f.trees.size());
}

// Mean decrease in Gini impurity per feature, averaged over trees.
inline std::vector<double> feature_importance(const ForestModel& f, std::size_t p) {
  std::vector<double> imp(p, 0.0);
  for (const auto& t : f.trees)
    for (const auto& nd : t.nodes)
      if (!nd.is_leaf()) imp[static_cast<std::size_t>(nd.feature)] += nd.gini_decrease;
  for (double& v : imp) v /= static_cast<double>(f.trees.size());
  return imp;
}

}  // namespace paydev::ml
