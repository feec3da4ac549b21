#include <cmath>

#include <gtest/gtest.h>

#include "paydev/eval/metrics.hpp"
#include "paydev/eval/report.hpp"
#include "paydev/rng.hpp"

using namespace paydev;
using namespace paydev::eval;

namespace {

// Direct pair count, O(n^2).
double pairwise_auc(const std::vector<double>& s, const std::vector<int>& y) {
  double wins = 0, pairs = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      if (y[i] == 1 && y[j] == 0) {
        pairs += 1;
        wins += s[i] > s[j] ? 1 : s[i] == s[j] ? 0.5 : 0;
      }
  return wins / pairs;
}

}  // namespace

TEST(RocAuc, MatchesPairwiseCountWithTies) {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(400);
    std::vector<double> s(n);
    std::vector<int> y(n);
    const std::uint64_t levels = 1 + rng.below(20);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng.below(levels));
      y[i] = rng.bernoulli(0.4);
    }
    y[0] = 0;
    y[1] = 1;
    EXPECT_NEAR(roc_auc(s, y), pairwise_auc(s, y), 1e-12);
  }
}

TEST(RocAuc, KnownValues) {
  EXPECT_DOUBLE_EQ(roc_auc(std::vector<double>{0.1, 0.4, 0.35, 0.8}, std::vector<int>{0, 0, 1, 1}), 0.75);
  EXPECT_DOUBLE_EQ(roc_auc(std::vector<double>{1, 1, 1, 1}, std::vector<int>{0, 1, 0, 1}), 0.5);
  EXPECT_DOUBLE_EQ(roc_auc(std::vector<double>{0, 1}, std::vector<int>{0, 1}), 1.0);
  EXPECT_DOUBLE_EQ(roc_auc(std::vector<double>{1, 0}, std::vector<int>{0, 1}), 0.0);
}

TEST(RocAuc, InvariantUnderMonotoneTransform) {
  Rng rng(3);
  std::vector<double> s(300), t(300);
  std::vector<int> y(300);
  for (std::size_t i = 0; i < 300; ++i) {
    s[i] = std::round(rng.uniform() * 50) / 10;
    t[i] = std::exp(3 * s[i]) - 7;
    y[i] = rng.bernoulli(0.5);
  }
  EXPECT_DOUBLE_EQ(roc_auc(s, y), roc_auc(t, y));
}

TEST(RocAuc, SingleClassIsAnError) {
  try {
    roc_auc(std::vector<double>{0.2, 0.3}, std::vector<int>{1, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::single_class);
  }
  EXPECT_THROW(roc_auc(std::vector<double>{0.2}, std::vector<int>{1, 0}), Error);
}

TEST(Confusion, CountsAndUndefinedRatios) {
  const std::vector<int> pred{1, 1, 0, 0, 1}, truth{1, 0, 0, 1, 1};
  const auto c = confusion(pred, truth);
  EXPECT_EQ(c.tp, 2);
  EXPECT_EQ(c.fp, 1);
  EXPECT_EQ(c.tn, 1);
  EXPECT_EQ(c.fn, 1);
  EXPECT_DOUBLE_EQ(*c.precision(), 2.0 / 3);
  EXPECT_DOUBLE_EQ(*c.recall(), 2.0 / 3);

  const auto none = precision_recall(std::vector<int>{0, 0, 0}, std::vector<int>{1, 0, 1});
  EXPECT_FALSE(none.precision);
  EXPECT_DOUBLE_EQ(*none.recall, 0.0);
  EXPECT_FALSE(precision_recall(std::vector<int>{1, 0}, std::vector<int>{0, 0}).recall);
}

TEST(MeanSd, SkipsUndefinedCells) {
  const auto m = mean_sd({1.0, std::nullopt, 3.0});
  EXPECT_EQ(m.count, 2u);
  EXPECT_DOUBLE_EQ(*m.mean, 2.0);
  EXPECT_FALSE(mean_sd({std::nullopt}).mean);
}
