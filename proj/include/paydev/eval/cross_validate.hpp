#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "paydev/error.hpp"
#include "paydev/eval/folds.hpp"
#include "paydev/eval/metrics.hpp"
#include "paydev/eval/report.hpp"
#include "paydev/ml/dataset.hpp"
#include "paydev/ml/model.hpp"
#include "paydev/rng.hpp"

namespace paydev::eval {

// Scores one held-out fold: AUC from probabilities, confusion at p >= 0.5.
inline EvalCell score_fold(const std::string& name, int repeat, int fold, const Eigen::VectorXd& proba,
                           std::span<const int> labels) {
  EvalCell cell{name, repeat, fold, std::nullopt, {}};
  std::vector<double> scores(proba.data(), proba.data() + proba.size());
  std::vector<int> pred(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) pred[i] = ml::classify(scores[i]);
  cell.counts = confusion(pred, labels);
  const auto pos = std::count(labels.begin(), labels.end(), 1);
  if (pos > 0 && pos < static_cast<std::ptrdiff_t>(labels.size())) cell.auc = roc_auc(scores, labels);
  return cell;
}

// Generic k-fold loop. `fit(train, repeat, fold)` returns a callable mapping a
// feature matrix to positive-class probabilities.
template <typename Fit>
std::vector<EvalCell> cross_validate(const ml::Dataset& data, const std::string& name,
                                     const FoldAssignments& folds, Fit&& fit) {
  std::vector<EvalCell> cells;
  for (std::size_t r = 0; r < folds.size(); ++r) {
    const auto& assign = folds[r];
    int k = 0;
    for (int f : assign) k = std::max(k, f + 1);
    for (int f = 0; f < k; ++f) {
      std::vector<std::size_t> train_idx, test_idx;
      for (std::size_t i = 0; i < assign.size(); ++i) (assign[i] == f ? test_idx : train_idx).push_back(i);
      const ml::Dataset train = data.subset(train_idx);
      const ml::Dataset test = data.subset(test_idx);
      Eigen::VectorXd proba;
      try {
        auto predictor = fit(train, static_cast<int>(r), f);
        proba = predictor(test);
      } catch (const Error& e) {
        throw Error(e.code(), name + " repeat " + std::to_string(r) + " fold " + std::to_string(f) + ": " + e.what());
      }
      cells.push_back(score_fold(name, static_cast<int>(r), f, proba, test.y));
    }
  }
  return cells;
}

// Forest seeds per (repeat, fold) come from the master seed.
inline ml::ClassifierParams fold_params(const ml::ClassifierParams& base, std::uint64_t seed, int repeat, int fold) {
  ml::ClassifierParams p = base;
  p.forest.seed = derive_seed(seed, {0x666f72ULL, static_cast<std::uint64_t>(repeat), static_cast<std::uint64_t>(fold)});
  return p;
}

inline std::vector<EvalCell> cross_validate(const ml::Dataset& data, ml::ClassifierKind kind,
                                            const ml::ClassifierParams& params, const FoldAssignments& folds,
                                            std::uint64_t seed) {
  return cross_validate(data, std::string(ml::to_string(kind)), folds,
                        [&](const ml::Dataset& train, int r, int f) {
                          auto model = ml::train(kind, train, fold_params(params, seed, r, f));
                          return [model = std::move(model)](const ml::Dataset& test) {
                            return ml::predict_proba(model, test.columns, test.x);
                          };
                        });
}

}  // namespace paydev::eval
