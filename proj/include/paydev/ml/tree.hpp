#pragma once

// CART classification tree: greedy binary splits minimizing weighted Gini
// impurity, followed by rpart-style cost-complexity pruning with
// alpha = cp * (root misclassification count).
//
// Split quality is compared in exact integer arithmetic. For a node with class
// counts (a, b) the weighted impurity n * gini = n - (a^2 + b^2) / n, so the
// best split maximises  sq_L / n_L + sq_R / n_R  with sq = a^2 + b^2; the two
// candidates' fractions are compared by cross multiplication in 128 bits.
// Ties therefore resolve exactly: lowest feature index, then lowest threshold.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "paydev/rng.hpp"

namespace paydev::ml {

struct TreeOptions {
  int minsplit = 20;
  double cp = 0.01;
  int maxdepth = 30;
  int mtry = 0;  // features tried per split; 0 = all
};

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0;  // rows with x < threshold go left
  int left = -1;
  int right = -1;
  std::int64_t n = 0;
  std::int64_t n_hired = 0;
  double gini_decrease = 0;  // n*gini(node) - n_L*gini(L) - n_R*gini(R), internal nodes

  bool is_leaf() const { return feature < 0; }
  double p_hired() const { return n > 0 ? static_cast<double>(n_hired) / static_cast<double>(n) : 0.5; }
};

struct TreeModel {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  double cp = 0;

  double predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
    int k = 0;
    while (!nodes[static_cast<std::size_t>(k)].is_leaf()) {
      const auto& nd = nodes[static_cast<std::size_t>(k)];
      k = row[nd.feature] < nd.threshold ? nd.left : nd.right;
    }
    return nodes[static_cast<std::size_t>(k)].p_hired();
  }

  std::size_t leaf_count() const {
    return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](auto& n) { return n.is_leaf(); }));
  }
};

inline double gini(std::int64_t n0, std::int64_t n1) {
  const std::int64_t n = n0 + n1;
  if (n == 0) return 0;
  const double p0 = static_cast<double>(n0) / static_cast<double>(n);
  const double p1 = static_cast<double>(n1) / static_cast<double>(n);
  return 1.0 - p0 * p0 - p1 * p1;
}

struct Split {
  int feature = -1;
  double threshold = 0;
  std::int64_t n_left = 0, hired_left = 0, n_right = 0, hired_right = 0;
};

namespace detail {

using i128 = __int128;

// Split score sq_L/n_L + sq_R/n_R held as a fraction.
struct Score {
  i128 num = 0;
  i128 den = 1;
  bool operator>(const Score& o) const { return num * o.den > o.num * den; }
};

inline Score score_of(std::int64_t nl, std::int64_t hl, std::int64_t nr, std::int64_t hr) {
  const i128 sql = static_cast<i128>(hl) * hl + static_cast<i128>(nl - hl) * (nl - hl);
  const i128 sqr = static_cast<i128>(hr) * hr + static_cast<i128>(nr - hr) * (nr - hr);
  return {sql * nr + sqr * nl, static_cast<i128>(nl) * nr};
}

inline double midpoint_between(double a, double b) {
  double m = a + (b - a) / 2;
  if (!(m > a) || m > b) m = b;
  return m;
}

inline double weighted_gini(std::int64_t n, std::int64_t hired) {
  return static_cast<double>(n) * gini(n - hired, hired);
}

}  // namespace detail

// Best Gini split of `rows` (indices into x/y, repeats allowed) over the given
// features. nullopt when no split strictly lowers the weighted impurity.
inline std::optional<Split> find_best_split(const Eigen::MatrixXd& x, std::span<const int> y,
                                            std::span<const std::size_t> rows,
                                            std::span<const std::size_t> features) {
  const auto n = static_cast<std::int64_t>(rows.size());
  if (n < 2) return std::nullopt;
  std::int64_t hired = 0;
  for (std::size_t r : rows) hired += y[r];
  const std::int64_t sq_parent = hired * hired + (n - hired) * (n - hired);

  std::optional<Split> best;
  detail::Score best_score{sq_parent, n};  // a split must beat the unsplit node
  std::vector<std::pair<double, int>> col(rows.size());
  for (std::size_t f : features) {
    for (std::size_t i = 0; i < rows.size(); ++i)
      col[i] = {x(static_cast<Eigen::Index>(rows[i]), static_cast<Eigen::Index>(f)), y[rows[i]]};
    std::sort(col.begin(), col.end());
    std::int64_t nl = 0, hl = 0;
    for (std::size_t i = 0; i + 1 < col.size(); ++i) {
      ++nl;
      hl += col[i].second;
      if (!(col[i].first < col[i + 1].first)) continue;
      const auto s = detail::score_of(nl, hl, n - nl, hired - hl);
      if (s > best_score) {
        best_score = s;
        best = Split{static_cast<int>(f), detail::midpoint_between(col[i].first, col[i + 1].first),
                     nl, hl, n - nl, hired - hl};
      }
    }
  }
  return best;
}

namespace detail {

struct TreeBuilder {
  const Eigen::MatrixXd& x;
  std::span<const int> y;
  const TreeOptions& opt;
  Rng* rng;  // null: every feature is a candidate
  TreeModel tree;

  int grow(std::vector<std::size_t> rows, int depth) {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    std::int64_t hired = 0;
    for (std::size_t r : rows) hired += y[r];
    tree.nodes[static_cast<std::size_t>(id)].n = static_cast<std::int64_t>(rows.size());
    tree.nodes[static_cast<std::size_t>(id)].n_hired = hired;

    const auto n = static_cast<std::int64_t>(rows.size());
    if (n < opt.minsplit || depth >= opt.maxdepth || hired == 0 || hired == n) return id;

    const auto p = static_cast<std::size_t>(x.cols());
    std::vector<std::size_t> features;
    if (rng && opt.mtry > 0 && static_cast<std::size_t>(opt.mtry) < p) {
      features = rng->sample_sorted(p, static_cast<std::size_t>(opt.mtry));
    } else {
      features.resize(p);
      std::iota(features.begin(), features.end(), 0);
    }
    const auto split = find_best_split(x, y, rows, features);
    if (!split) return id;

    std::vector<std::size_t> left, right;
    for (std::size_t r : rows)
      (x(static_cast<Eigen::Index>(r), split->feature) < split->threshold ? left : right).push_back(r);
    rows.clear();
    rows.shrink_to_fit();

    const int l = grow(std::move(left), depth + 1);
    const int r = grow(std::move(right), depth + 1);
    auto& node = tree.nodes[static_cast<std::size_t>(id)];
    node.feature = split->feature;
    node.threshold = split->threshold;
    node.left = l;
    node.right = r;
    node.gini_decrease = weighted_gini(n, hired) - weighted_gini(split->n_left, split->hired_left) -
                         weighted_gini(split->n_right, split->hired_right);
    return id;
  }
};

inline std::int64_t misclassified(const TreeNode& n) { return std::min(n.n_hired, n.n - n.n_hired); }

struct SubtreeStats {
  std::int64_t risk = 0;  // misclassifications summed over leaves
  std::int64_t leaves = 0;
};

inline SubtreeStats subtree_stats(const TreeModel& t, int k) {
  const auto& nd = t.nodes[static_cast<std::size_t>(k)];
  if (nd.is_leaf()) return {misclassified(nd), 1};
  const auto l = subtree_stats(t, nd.left), r = subtree_stats(t, nd.right);
  return {l.risk + r.risk, l.leaves + r.leaves};
}

// Weakest-link pruning: repeatedly collapse internal nodes whose risk
// reduction per added leaf, (R(t) - R(T_t)) / (leaves - 1), is below alpha.
inline void prune(TreeModel& t, double alpha) {
  if (alpha <= 0) return;
  for (;;) {
    double weakest = std::numeric_limits<double>::infinity();
    std::vector<double> g(t.nodes.size(), weakest);
    for (std::size_t k = 0; k < t.nodes.size(); ++k) {
      if (t.nodes[k].is_leaf()) continue;
      const auto s = subtree_stats(t, static_cast<int>(k));
      g[k] = static_cast<double>(misclassified(t.nodes[k]) - s.risk) / static_cast<double>(s.leaves - 1);
      weakest = std::min(weakest, g[k]);
    }
    if (!(weakest < alpha)) return;
    // Collapse every node at the weakest level, top-down so descendants go too.
    std::vector<bool> reachable(t.nodes.size(), false);
    std::vector<int> stack{0};
    while (!stack.empty()) {
      const int k = stack.back();
      stack.pop_back();
      reachable[static_cast<std::size_t>(k)] = true;
      auto& nd = t.nodes[static_cast<std::size_t>(k)];
      if (nd.is_leaf()) continue;
      if (g[static_cast<std::size_t>(k)] <= weakest) {
        nd.feature = -1;
        nd.left = nd.right = -1;
        nd.gini_decrease = 0;
        continue;
      }
      stack.push_back(nd.left);
      stack.push_back(nd.right);
    }
    // Compact: drop unreachable nodes, preserving pre-order numbering.
    std::vector<int> remap(t.nodes.size(), -1);
    std::vector<TreeNode> kept;
    for (std::size_t k = 0; k < t.nodes.size(); ++k) {
      if (!reachable[k]) continue;
      remap[k] = static_cast<int>(kept.size());
      kept.push_back(t.nodes[k]);
    }
    for (auto& nd : kept) {
      if (nd.is_leaf()) continue;
      nd.left = remap[static_cast<std::size_t>(nd.left)];
      nd.right = remap[static_cast<std::size_t>(nd.right)];
    }
    t.nodes = std::move(kept);
  }
}

}  // namespace detail

// Grows a tree on `rows` (with repeats for bootstrap samples).
inline TreeModel grow_tree(const Eigen::MatrixXd& x, std::span<const int> y, std::vector<std::size_t> rows,
                           const TreeOptions& opt, Rng* rng = nullptr) {
  detail::TreeBuilder b{x, y, opt, rng, {}};
  b.tree.cp = opt.cp;
  b.grow(std::move(rows), 0);
  const double root_risk = static_cast<double>(detail::misclassified(b.tree.nodes.front()));
  detail::prune(b.tree, opt.cp * root_risk);
  return std::move(b.tree);
}

inline TreeModel fit_tree(const Eigen::MatrixXd& x, std::span<const int> y, const TreeOptions& opt = {}) {
  std::vector<std::size_t> rows(static_cast<std::size_t>(x.rows()));
  std::iota(rows.begin(), rows.end(), 0);
  return grow_tree(x, y, std::move(rows), opt);
}

inline Eigen::VectorXd predict_proba(const TreeModel& t, const Eigen::MatrixXd& x) {
  Eigen::VectorXd p(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) p[r] = t.predict_row(x.row(r));
  return p;
}

}  // namespace paydev::ml
