#pragma once

#include <cmath>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "paydev/eval/metrics.hpp"
#include "paydev/text.hpp"

namespace paydev::eval {

// One (classifier, repeat, fold) evaluation.
struct EvalCell {
  std::string classifier;
  int repeat = 0;
  int fold = 0;
  std::optional<double> auc;  // nullopt when the scored set holds one class
  Confusion counts;

  std::optional<double> precision() const { return counts.precision(); }
  std::optional<double> recall() const { return counts.recall(); }
};

struct MeanSd {
  std::optional<double> mean;
  std::optional<double> sd;  // sample standard deviation; needs two values
  std::size_t count = 0;     // defined (non-NA) cells
};

inline MeanSd mean_sd(const std::vector<std::optional<double>>& xs) {
  MeanSd out;
  std::vector<double> v;
  for (const auto& x : xs)
    if (x) v.push_back(*x);
  out.count = v.size();
  if (v.empty()) return out;
  double sum = 0;
  for (double x : v) sum += x;
  const double mean = sum / static_cast<double>(v.size());
  out.mean = mean;
  if (v.size() > 1) {
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    out.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return out;
}

struct EvalSummary {
  std::string classifier;
  MeanSd auc, precision, recall;
  std::size_t cells = 0;
};

struct EvalReport {
  nlohmann::ordered_json config;  // echo of the settings that produced it
  std::vector<EvalCell> cells;

  // Unweighted means over each classifier's cells, in first-seen order.
  std::vector<EvalSummary> summaries() const {
    std::vector<std::string> order;
    std::map<std::string, std::vector<const EvalCell*>> groups;
    for (const auto& c : cells) {
      if (!groups.contains(c.classifier)) order.push_back(c.classifier);
      groups[c.classifier].push_back(&c);
    }
    std::vector<EvalSummary> out;
    for (const auto& name : order) {
      std::vector<std::optional<double>> auc, prec, rec;
      for (const auto* c : groups[name]) {
        auc.push_back(c->auc);
        prec.push_back(c->precision());
        rec.push_back(c->recall());
      }
      out.push_back({name, mean_sd(auc), mean_sd(prec), mean_sd(rec), groups[name].size()});
    }
    return out;
  }

  std::optional<EvalSummary> summary(const std::string& classifier) const {
    for (auto& s : summaries())
      if (s.classifier == classifier) return s;
    return std::nullopt;
  }
};

inline nlohmann::ordered_json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

inline nlohmann::ordered_json to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["config"] = r.config;
  auto& results = j["results"] = nlohmann::ordered_json::array();
  for (const auto& c : r.cells) {
    nlohmann::ordered_json e;
    e["classifier"] = c.classifier;
    e["repeat"] = c.repeat;
    e["fold"] = c.fold;
    e["auc"] = optional_json(c.auc);
    e["precision"] = optional_json(c.precision());
    e["recall"] = optional_json(c.recall());
    e["tp"] = c.counts.tp;
    e["fp"] = c.counts.fp;
    e["tn"] = c.counts.tn;
    e["fn"] = c.counts.fn;
    results.push_back(std::move(e));
  }
  auto& summary = j["summary"] = nlohmann::ordered_json::array();
  for (const auto& s : r.summaries()) {
    nlohmann::ordered_json e;
    e["classifier"] = s.classifier;
    e["cells"] = s.cells;
    e["auc_mean"] = optional_json(s.auc.mean);
    e["auc_sd"] = optional_json(s.auc.sd);
    e["precision_mean"] = optional_json(s.precision.mean);
    e["precision_sd"] = optional_json(s.precision.sd);
    e["recall_mean"] = optional_json(s.recall.mean);
    e["recall_sd"] = optional_json(s.recall.sd);
    summary.push_back(std::move(e));
  }
  return j;
}

inline std::string to_table(const EvalReport& r, const std::string& title = "") {
  auto cell = [](const std::optional<double>& v, int digits = 3) {
    return v ? text::format_fixed(*v, digits) : std::string("NA");
  };
  std::ostringstream out;
  if (!title.empty()) out << title << '\n';
  out << std::left << std::setw(22) << "classifier" << std::right << std::setw(9) << "ROC AUC"
      << std::setw(11) << "Precision" << std::setw(9) << "Recall" << std::setw(8) << "cells" << '\n';
  for (const auto& s : r.summaries())
    out << std::left << std::setw(22) << s.classifier << std::right << std::setw(9) << cell(s.auc.mean)
        << std::setw(11) << cell(s.precision.mean) << std::setw(9) << cell(s.recall.mean) << std::setw(8)
        << s.cells << '\n';
  return out.str();
}

}  // namespace paydev::eval
