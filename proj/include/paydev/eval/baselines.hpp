#pragma once

// Rule-based classifiers that need no training: everybody hired, an employer
// email domain, and the share of commits made on weekdays between 9:00 and
// 17:00 local time against a threshold.

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "paydev/error.hpp"
#include "paydev/eval/metrics.hpp"
#include "paydev/eval/report.hpp"
#include "paydev/features.hpp"
#include "paydev/ingest.hpp"

namespace paydev::eval {

inline constexpr int kOfficeHoursStart = 9;
inline constexpr int kOfficeHoursEnd = 17;

struct BaselineSpec {
  enum class Kind { allhired, email, officehours };
  Kind kind = Kind::allhired;
  std::vector<std::string> email_domains{"mozilla.com"};
  double threshold = 0.5;  // officehours only, in (0, 1)

  std::string name() const {
    switch (kind) {
      case Kind::allhired: return "allhired";
      case Kind::email: return "email";
      case Kind::officehours: {
        std::string pct = text::format_fixed(threshold * 100, 0);
        return pct + "%officehours";
      }
    }
    return "?";
  }

  static BaselineSpec all_hired() { return {Kind::allhired, {}, 0.5}; }
  static BaselineSpec email(std::vector<std::string> domains) { return {Kind::email, std::move(domains), 0.5}; }
  static BaselineSpec office_hours(double t) {
    if (!(t > 0 && t < 1)) throw Error(ErrorCode::usage, "office-hours threshold must lie in (0, 1)");
    return {Kind::officehours, {}, t};
  }
};

// Threshold presets: 5%, 50% and 95% office-hours shares.
inline std::vector<BaselineSpec> standard_baselines(const std::vector<std::string>& domains) {
  return {BaselineSpec::all_hired(), BaselineSpec::email(domains), BaselineSpec::office_hours(0.95),
          BaselineSpec::office_hours(0.05), BaselineSpec::office_hours(0.5)};
}

inline bool in_office_hours(const CommitRecord& c) {
  const LocalTime lt = c.local_time();
  return !is_weekend(lt.weekday) && lt.hour >= kOfficeHoursStart && lt.hour < kOfficeHoursEnd;
}

inline bool has_domain(const CommitRecord& c, const std::vector<std::string>& domains) {
  const auto at = c.author_email.rfind('@');
  if (at == std::string::npos) return false;
  const std::string_view domain = std::string_view(c.author_email).substr(at + 1);
  for (const auto& d : domains)
    if (domain == text::ascii_lower(d)) return true;
  return false;
}

struct BaselinePrediction {
  double score = 0;
  int hired = 0;
};

inline BaselinePrediction baseline_predict(const BaselineSpec& spec, const std::vector<CommitRecord>& commits) {
  if (commits.empty()) return {};
  std::size_t hits = 0;
  switch (spec.kind) {
    case BaselineSpec::Kind::allhired: return {1.0, 1};
    case BaselineSpec::Kind::email:
      for (const auto& c : commits) hits += has_domain(c, spec.email_domains) ? 1 : 0;
      return {static_cast<double>(hits) / static_cast<double>(commits.size()), hits > 0 ? 1 : 0};
    case BaselineSpec::Kind::officehours: {
      for (const auto& c : commits) hits += in_office_hours(c) ? 1 : 0;
      const double share = static_cast<double>(hits) / static_cast<double>(commits.size());
      return {share, share >= spec.threshold ? 1 : 0};
    }
  }
  return {};
}

// Single commit: the rules applied to that commit alone.
inline BaselinePrediction baseline_predict_commit(const BaselineSpec& spec, const CommitRecord& c) {
  return baseline_predict(spec, std::vector<CommitRecord>{c});
}

// Baselines emit hard decisions, so their AUC is computed from the 0/1
// predictions; a constant rule scores 0.5.
inline EvalCell score_baseline(const std::string& name, std::span<const int> predictions,
                               std::span<const int> labels) {
  EvalCell cell{name, 0, 0, std::nullopt, confusion(predictions, labels)};
  const auto pos = std::count(labels.begin(), labels.end(), 1);
  if (pos > 0 && pos < static_cast<std::ptrdiff_t>(labels.size())) {
    std::vector<double> scores(predictions.begin(), predictions.end());
    cell.auc = roc_auc(scores, labels);
  }
  return cell;
}

inline EvalCell evaluate_baseline(const BaselineSpec& spec, const std::vector<Developer>& developers,
                                  std::span<const int> labels) {
  std::vector<int> pred;
  for (const auto& d : developers) pred.push_back(baseline_predict(spec, d.commits).hired);
  return score_baseline(spec.name(), pred, labels);
}

}  // namespace paydev::eval
