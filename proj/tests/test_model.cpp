#include <sstream>

#include <gtest/gtest.h>

#include "paydev/ml/model.hpp"

using namespace paydev;
using namespace paydev::ml;

namespace {

Dataset toy(std::uint64_t seed, Eigen::Index n = 120) {
  Rng rng(seed);
  Dataset d;
  d.columns = {"weekend", "office", "night"};
  d.x.resize(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) d.x(i, j) = rng.uniform();
    d.y.push_back(rng.bernoulli(d.x(i, 1) > 0.5 ? 0.85 : 0.15));
  }
  return d;
}

ClassifierParams small_params() {
  ClassifierParams p;
  p.forest.trees = 25;
  return p;
}

TrainedModel round_trip(const TrainedModel& m) {
  std::stringstream ss(save_model(m));
  return load_model(ss);
}

}  // namespace

TEST(Model, SaveLoadGivesIdenticalPredictions) {
  const auto d = toy(1);
  for (auto kind : {ClassifierKind::logit, ClassifierKind::rpart, ClassifierKind::randomforest}) {
    const auto m = train(kind, d, small_params());
    const auto back = round_trip(m);
    EXPECT_EQ(back.kind, kind);
    EXPECT_EQ(back.columns, d.columns);
    EXPECT_EQ(predict_proba(back, d.columns, d.x), predict_proba(m, d.columns, d.x)) << to_string(kind);
    EXPECT_EQ(save_model(back), save_model(m));
  }
}

TEST(Model, ColumnsAreMatchedByName) {
  const auto d = toy(2);
  const auto m = train(ClassifierKind::logit, d, small_params());
  Eigen::MatrixXd swapped(d.x.rows(), 3);
  swapped << d.x.col(2), d.x.col(0), d.x.col(1);
  EXPECT_EQ(predict_proba(m, {"night", "weekend", "office"}, swapped), predict_proba(m, d.columns, d.x));
}

TEST(Model, ColumnMismatchIsReported) {
  const auto d = toy(3);
  const auto m = train(ClassifierKind::rpart, d, small_params());
  try {
    predict_proba(m, {"weekend", "office"}, d.x.leftCols(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::column_mismatch);
    EXPECT_EQ(e.exit_code(), 4);
    EXPECT_NE(std::string(e.what()).find("night"), std::string::npos);
  }
}

TEST(Model, MissingValuesUseTrainingMedians) {
  auto d = toy(4);
  d.x(0, 0) = std::numeric_limits<double>::quiet_NaN();
  const auto m = train(ClassifierKind::logit, d, small_params());
  Eigen::MatrixXd row = d.x.topRows(1);
  row(0, 1) = std::numeric_limits<double>::quiet_NaN();
  Eigen::MatrixXd filled = row;
  filled(0, 0) = m.imputer.medians[0];
  filled(0, 1) = m.imputer.medians[1];
  EXPECT_EQ(predict_proba(m, d.columns, row), predict_proba(m, d.columns, filled));
}

TEST(Model, SingleClassTrainingFails) {
  auto d = toy(5, 10);
  std::fill(d.y.begin(), d.y.end(), 1);
  try {
    train(ClassifierKind::randomforest, d, small_params());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::single_class);
  }
}

TEST(Model, RejectsCorruptFiles) {
  std::stringstream bad_magic("NOTAMODEL\n{}\n");
  EXPECT_THROW(load_model(bad_magic), Error);
  std::stringstream truncated(std::string(kModelMagic) + "\n{\"kind\":\"logit\"");
  EXPECT_THROW(load_model(truncated), Error);
  std::stringstream bad_kind(std::string(kModelMagic) + "\n{\"kind\":\"svm\"}\n");
  EXPECT_THROW(load_model(bad_kind), Error);
}

TEST(Introspect, SingleLeafTreeIsOneLine) {
  auto d = toy(6, 40);
  ClassifierParams p;
  p.tree.cp = 1.0;
  const auto m = train(ClassifierKind::rpart, d, p);
  const std::string tree = format_tree(std::get<TreeModel>(m.model), m.columns);
  EXPECT_EQ(std::count(tree.begin(), tree.end(), '\n'), 1);
  EXPECT_EQ(tree.rfind("root", 0), 0u);
}

TEST(Introspect, NamesRootSplitAndRanksCoefficients) {
  const auto d = toy(7, 300);
  const auto tree = introspect(train(ClassifierKind::rpart, d, small_params()));
  EXPECT_NE(tree.find("office <"), std::string::npos) << tree;
  const auto logit = train(ClassifierKind::logit, d, small_params());
  const auto ranked = ranked_coefficients(std::get<LogitModel>(logit.model), logit.columns);
  EXPECT_EQ(ranked.front().first, "office");
  const auto forest = introspect(train(ClassifierKind::randomforest, d, small_params()));
  EXPECT_NE(forest.find("mean decrease in Gini"), std::string::npos);
}

TEST(Classifier, NamesRoundTrip) {
  for (auto kind : {ClassifierKind::logit, ClassifierKind::rpart, ClassifierKind::randomforest})
    EXPECT_EQ(parse_classifier(to_string(kind)), kind);
  EXPECT_THROW(parse_classifier("svm"), Error);
  EXPECT_EQ(classify(0.5), 1);
  EXPECT_EQ(classify(0.4999), 0);
}
