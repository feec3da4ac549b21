#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "paydev/error.hpp"

namespace paydev::eval {

// Area under the ROC curve as the Mann-Whitney statistic: the share of
// (positive, negative) pairs ranked correctly, ties counting one half.
// Sort-based, O(n log n).
inline double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw Error(ErrorCode::schema, "roc_auc: size mismatch");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });

  std::uint64_t n_pos = 0, n_neg = 0;
  std::uint64_t twice_wins = 0;  // 2 * (wins + ties / 2)
  std::uint64_t neg_below = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    std::uint64_t pos = 0, neg = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] == 1 ? pos : neg)++;
      ++j;
    }
    twice_wins += 2 * pos * neg_below + pos * neg;
    neg_below += neg;
    n_pos += pos;
    n_neg += neg;
    i = j;
  }
  if (n_pos == 0 || n_neg == 0) throw Error(ErrorCode::single_class, "roc_auc needs both classes");
  return static_cast<double>(twice_wins) / (2.0 * static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

struct Confusion {
  std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;

  // Undefined (nullopt) when nothing was predicted positive.
  std::optional<double> precision() const {
    if (tp + fp == 0) return std::nullopt;
    return static_cast<double>(tp) / static_cast<double>(tp + fp);
  }
  std::optional<double> recall() const {
    if (tp + fn == 0) return std::nullopt;
    return static_cast<double>(tp) / static_cast<double>(tp + fn);
  }
};

inline Confusion confusion(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.size() != labels.size()) throw Error(ErrorCode::schema, "confusion: size mismatch");
  Confusion c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool p = predictions[i] == 1, t = labels[i] == 1;
    if (p && t) ++c.tp;
    else if (p) ++c.fp;
    else if (t) ++c.fn;
    else ++c.tn;
  }
  return c;
}

struct PrecisionRecall {
  std::optional<double> precision;
  std::optional<double> recall;
};

inline PrecisionRecall precision_recall(std::span<const int> predictions, std::span<const int> labels) {
  const Confusion c = confusion(predictions, labels);
  return {c.precision(), c.recall()};
}

}  // namespace paydev::eval
