#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "paydev/error.hpp"
#include "paydev/features.hpp"

namespace paydev::ml {

// Rows are samples. y[i] == 1 marks the positive class (hired).
struct Dataset {
  std::vector<std::string> columns;
  Eigen::MatrixXd x;
  std::vector<int> y;
  std::vector<std::string> row_ids;

  std::size_t rows() const { return y.size(); }
  std::size_t cols() const { return columns.size(); }

  std::size_t positives() const { return static_cast<std::size_t>(std::count(y.begin(), y.end(), 1)); }

  Dataset subset(std::span<const std::size_t> idx) const {
    Dataset d;
    d.columns = columns;
    d.x.resize(static_cast<Eigen::Index>(idx.size()), x.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      d.x.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(idx[i]));
      d.y.push_back(y[idx[i]]);
      if (!row_ids.empty()) d.row_ids.push_back(row_ids[idx[i]]);
    }
    return d;
  }
};

inline Dataset make_dataset(const FeatureMatrix& m, std::vector<int> y) {
  if (y.size() != static_cast<std::size_t>(m.values.rows()))
    throw Error(ErrorCode::schema, "label count does not match feature rows");
  return Dataset{m.columns, m.values, std::move(y), m.row_ids};
}

// Throws unless the data can be used for training.
inline void check_trainable(const Dataset& d) {
  if (static_cast<std::size_t>(d.x.rows()) != d.y.size() ||
      static_cast<std::size_t>(d.x.cols()) != d.columns.size())
    throw Error(ErrorCode::schema, "dataset shape mismatch");
  if (d.rows() < 2) throw Error(ErrorCode::single_class, "need at least 2 training rows");
  for (int v : d.y)
    if (v != 0 && v != 1) throw Error(ErrorCode::schema, "labels must be 0 or 1");
  const std::size_t pos = d.positives();
  if (pos == 0 || pos == d.rows())
    throw Error(ErrorCode::single_class, "training labels contain a single class");
  if (!d.x.allFinite()) throw Error(ErrorCode::schema, "dataset contains non-finite values");
}

// Per-column training medians used to fill NaN cells.
struct Imputer {
  std::vector<double> medians;

  static Imputer fit(const Eigen::MatrixXd& x) {
    Imputer imp;
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      std::vector<double> present;
      for (Eigen::Index r = 0; r < x.rows(); ++r)
        if (!std::isnan(x(r, c))) present.push_back(x(r, c));
      imp.medians.push_back(median(std::move(present), 0.0));
    }
    return imp;
  }

  void apply(Eigen::MatrixXd& x) const {
    for (Eigen::Index c = 0; c < x.cols(); ++c)
      for (Eigen::Index r = 0; r < x.rows(); ++r)
        if (std::isnan(x(r, c))) x(r, c) = medians[static_cast<std::size_t>(c)];
  }
};

// Reorders `x` (with columns `have`) into the order of `want`. Throws a
// column-mismatch error naming missing and extra columns.
inline Eigen::MatrixXd align_columns(const std::vector<std::string>& want,
                                     const std::vector<std::string>& have, const Eigen::MatrixXd& x) {
  std::vector<std::string> missing, extra;
  for (const auto& w : want)
    if (std::find(have.begin(), have.end(), w) == have.end()) missing.push_back(w);
  for (const auto& h : have)
    if (std::find(want.begin(), want.end(), h) == want.end()) extra.push_back(h);
  if (!missing.empty() || !extra.empty()) {
    auto list = [](const std::vector<std::string>& v) {
      std::string s;
      for (const auto& e : v) s += (s.empty() ? "" : ", ") + e;
      return s.empty() ? std::string("none") : s;
    };
    throw Error(ErrorCode::column_mismatch,
                "column mismatch; missing: " + list(missing) + "; extra: " + list(extra));
  }
  Eigen::MatrixXd out(x.rows(), static_cast<Eigen::Index>(want.size()));
  for (std::size_t c = 0; c < want.size(); ++c) {
    const auto src = std::find(have.begin(), have.end(), want[c]) - have.begin();
    out.col(static_cast<Eigen::Index>(c)) = x.col(src);
  }
  return out;
}

}  // namespace paydev::ml
