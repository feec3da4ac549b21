#pragma once

// Commit-level experiment: fit on the commits of the most active developers
// (the smallest group covering a given share of all commits), then score all
// commits and, separately, the commits of everybody else.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "paydev/error.hpp"
#include "paydev/eval/baselines.hpp"
#include "paydev/eval/cross_validate.hpp"
#include "paydev/eval/report.hpp"
#include "paydev/features.hpp"
#include "paydev/labels.hpp"
#include "paydev/ml/dataset.hpp"
#include "paydev/ml/model.hpp"

namespace paydev::eval {

struct PerCommitResult {
  EvalReport all;           // every commit of every labeled developer
  EvalReport least_active;  // commits of developers outside the training group
  std::vector<std::string> training_developers;
  std::vector<std::string> held_out_developers;
  std::size_t training_commits = 0;
  std::size_t total_commits = 0;
};

// Developers by commit count (descending, id ascending); the first `k` whose
// commits reach `coverage` of the total.
inline std::size_t training_prefix(const std::vector<const Developer*>& ranked, double coverage) {
  std::size_t total = 0;
  for (auto* d : ranked) total += d->commits.size();
  std::size_t cum = 0, k = 0;
  while (k < ranked.size() && static_cast<double>(cum) < coverage * static_cast<double>(total))
    cum += ranked[k++]->commits.size();
  return k;
}

inline std::vector<const Developer*> rank_by_activity(const std::vector<Developer>& developers) {
  std::vector<const Developer*> ranked;
  for (const auto& d : developers) ranked.push_back(&d);
  std::sort(ranked.begin(), ranked.end(), [](auto* a, auto* b) {
    return a->commits.size() != b->commits.size() ? a->commits.size() > b->commits.size() : a->id() < b->id();
  });
  return ranked;
}

struct CommitRows {
  Eigen::MatrixXd x;
  std::vector<int> y;
  std::vector<const CommitRecord*> commits;
};

inline CommitRows commit_rows(const std::vector<const Developer*>& devs, const LabelSet& labels) {
  std::vector<std::array<double, CommitFeatures::kCount>> rows;
  CommitRows out;
  for (const auto* d : devs) {
    const auto agg = developer_features(d->commits);
    const auto feats = commit_features(d->commits, agg);
    const auto status = commit_labels(*d, labels);
    for (std::size_t i = 0; i < feats.size(); ++i) {
      rows.push_back(feats[i].values());
      out.y.push_back(status[i] == Status::hired ? 1 : 0);
      out.commits.push_back(&d->commits[i]);
    }
  }
  out.x.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(CommitFeatures::kCount));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < CommitFeatures::kCount; ++c)
      out.x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return out;
}

inline std::vector<std::string> commit_columns() {
  return {kCommitFeatureColumns.begin(), kCommitFeatureColumns.end()};
}

inline PerCommitResult per_commit_experiment(const std::vector<Developer>& developers, const LabelSet& labels,
                                             const std::vector<ml::ClassifierKind>& classifiers,
                                             const ml::ClassifierParams& params, double coverage,
                                             std::uint64_t seed, const std::vector<std::string>& email_domains) {
  if (!(coverage > 0 && coverage <= 1)) throw Error(ErrorCode::usage, "coverage must lie in (0, 1]");
  if (developers.empty()) throw Error(ErrorCode::single_class, "no labeled developers");
  const auto ranked = rank_by_activity(developers);
  const std::size_t k = training_prefix(ranked, coverage);
  const std::vector<const Developer*> train_devs(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k));
  const std::vector<const Developer*> rest_devs(ranked.begin() + static_cast<std::ptrdiff_t>(k), ranked.end());

  PerCommitResult result;
  for (auto* d : train_devs) result.training_developers.push_back(d->id());
  for (auto* d : rest_devs) result.held_out_developers.push_back(d->id());

  const CommitRows train = commit_rows(train_devs, labels);
  const CommitRows rest = commit_rows(rest_devs, labels);
  result.training_commits = train.y.size();
  result.total_commits = train.y.size() + rest.y.size();

  CommitRows all;
  all.x.resize(static_cast<Eigen::Index>(result.total_commits), static_cast<Eigen::Index>(CommitFeatures::kCount));
  if (train.x.rows() > 0) all.x.topRows(train.x.rows()) = train.x;
  if (rest.x.rows() > 0) all.x.bottomRows(rest.x.rows()) = rest.x;
  all.y = train.y;
  all.y.insert(all.y.end(), rest.y.begin(), rest.y.end());
  all.commits = train.commits;
  all.commits.insert(all.commits.end(), rest.commits.begin(), rest.commits.end());

  ml::Dataset train_set{commit_columns(), train.x, train.y, {}};
  const auto pos = train_set.positives();
  if (pos == 0 || pos == train_set.rows())
    throw Error(ErrorCode::single_class, "training developers' commits carry a single class");

  for (auto kind : classifiers) {
    auto model = ml::train(kind, train_set, fold_params(params, seed, 0, 0));
    model.level = "commit";
    const std::string name(ml::to_string(kind));
    result.all.cells.push_back(score_fold(name, 0, 0, ml::predict_proba(model, train_set.columns, all.x), all.y));
    result.least_active.cells.push_back(
        score_fold(name, 0, 0, ml::predict_proba(model, train_set.columns, rest.x), rest.y));
  }

  const std::vector<std::pair<std::string, BaselineSpec>> rules = {
      {"allpaid", BaselineSpec::all_hired()},
      {"email", BaselineSpec::email(email_domains)},
      {"officehours", BaselineSpec{BaselineSpec::Kind::officehours, {}, 1.0}}};
  for (const auto& [name, spec] : rules) {
    auto predict = [&](const CommitRows& rows) {
      std::vector<int> pred;
      for (const auto* c : rows.commits) pred.push_back(baseline_predict_commit(spec, *c).hired);
      return score_baseline(name, pred, rows.y);
    };
    result.all.cells.push_back(predict(all));
    result.least_active.cells.push_back(predict(rest));
  }
  return result;
}

}  // namespace paydev::eval
