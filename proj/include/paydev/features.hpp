#pragma once

// Per-developer activity metrics and per-commit feature rows. Every time-of-day
// and day-of-week quantity uses the commit's own local time.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "paydev/civil_time.hpp"
#include "paydev/csv.hpp"
#include "paydev/error.hpp"
#include "paydev/identity.hpp"
#include "paydev/ingest.hpp"
#include "paydev/text.hpp"

namespace paydev {

// Hour buckets are half-open: [start, end).
inline constexpr int kOfficeFeatureStart = 8;
inline constexpr int kOfficeFeatureEnd = 17;

enum class DayPart { night, morning, afternoon, evening };

inline constexpr DayPart day_part(int hour) noexcept {
  return hour < 6 ? DayPart::night : hour < 12 ? DayPart::morning : hour < 18 ? DayPart::afternoon
                                                                              : DayPart::evening;
}

struct DeveloperFeatures {
  std::int64_t period = 0;
  std::int64_t days = 0;
  std::int64_t weeks = 0;
  double timediff = 0;
  std::int64_t commits = 0;
  double loc_per_commit = 0;
  double weekend = 0;
  double night = 0;
  double morning = 0;
  double afternoon = 0;
  double evening = 0;
  double office = 0;
  int most_active_hour = 0;
  int beginning_regular = 0;
  int length_regular = 0;
  int end_regular = 0;

  static constexpr std::size_t kCount = 16;

  std::array<double, kCount> values() const {
    return {static_cast<double>(period), static_cast<double>(days), static_cast<double>(weeks),
            timediff, static_cast<double>(commits), loc_per_commit, weekend, night, morning,
            afternoon, evening, office, static_cast<double>(most_active_hour),
            static_cast<double>(beginning_regular), static_cast<double>(length_regular),
            static_cast<double>(end_regular)};
  }
};

inline constexpr std::array<std::string_view, DeveloperFeatures::kCount> kFeatureColumns = {
    "period",  "days",   "weeks",     "timediff", "commits", "loc_per_commit",
    "weekend", "night",  "morning",   "afternoon", "evening", "office",
    "most_active_hour", "beginning_regular", "length_regular", "end_regular"};

inline constexpr std::array<std::string_view, 4> kVolumeColumns = {"commits", "days", "weeks", "period"};

inline constexpr std::array<std::string_view, 8> kIntegerColumns = {
    "period", "days", "weeks", "commits", "most_active_hour",
    "beginning_regular", "length_regular", "end_regular"};

enum class FeatureMode { all, no_volume };

inline std::vector<std::string> feature_columns(FeatureMode mode) {
  std::vector<std::string> cols;
  for (auto c : kFeatureColumns) {
    if (mode == FeatureMode::no_volume &&
        std::find(kVolumeColumns.begin(), kVolumeColumns.end(), c) != kVolumeColumns.end())
      continue;
    cols.emplace_back(c);
  }
  return cols;
}

inline std::string_view to_string(FeatureMode m) { return m == FeatureMode::all ? "all" : "no_volume"; }

inline FeatureMode parse_feature_mode(std::string_view s) {
  if (s == "all") return FeatureMode::all;
  if (s == "no_volume") return FeatureMode::no_volume;
  throw Error(ErrorCode::usage, "unknown feature mode '" + std::string(s) + "'");
}

// Mean of the two middle values for even sizes. Empty input -> fallback.
inline double median(std::vector<double> v, double fallback = 0.0) {
  if (v.empty()) return fallback;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper) / 2;
}

// Nearest-rank percentile (`percent` in 1..100) of a sorted sequence.
template <typename T>
T nearest_rank(const std::vector<T>& sorted, int percent) {
  const std::size_t n = sorted.size();
  std::size_t rank = (static_cast<std::size_t>(percent) * n + 99) / 100;
  rank = std::clamp<std::size_t>(rank, 1, n);
  return sorted[rank - 1];
}

// Commits of one developer ordered by (timestamp_utc, sha).
inline std::vector<CommitRecord> sorted_by_time(std::vector<CommitRecord> commits) {
  std::sort(commits.begin(), commits.end(), [](const CommitRecord& a, const CommitRecord& b) {
    return a.timestamp_utc != b.timestamp_utc ? a.timestamp_utc < b.timestamp_utc : a.sha < b.sha;
  });
  return commits;
}

inline DeveloperFeatures developer_features(const std::vector<CommitRecord>& input) {
  if (input.empty()) throw Error(ErrorCode::schema, "developer_features needs at least one commit");
  const std::vector<CommitRecord> commits = sorted_by_time(input);
  const double n = static_cast<double>(commits.size());

  DeveloperFeatures f;
  f.commits = static_cast<std::int64_t>(commits.size());

  std::set<std::int64_t> dates;
  std::set<IsoWeek> weeks;
  std::array<std::int64_t, 24> per_hour{};
  std::int64_t weekend = 0, office = 0;
  std::array<std::int64_t, 4> parts{};
  std::vector<int> weekday_hours;
  std::vector<double> locs;

  for (const auto& c : commits) {
    const LocalTime lt = c.local_time();
    dates.insert(days_from_civil(lt.date));
    weeks.insert(lt.iso_week);
    ++per_hour[static_cast<std::size_t>(lt.hour)];
    ++parts[static_cast<std::size_t>(day_part(lt.hour))];
    if (is_weekend(lt.weekday)) ++weekend;
    else weekday_hours.push_back(lt.hour);
    if (lt.hour >= kOfficeFeatureStart && lt.hour < kOfficeFeatureEnd) ++office;
    if (c.has_line_counts()) locs.push_back(static_cast<double>(c.lines_added + c.lines_deleted));
  }

  f.period = *dates.rbegin() - *dates.begin();
  f.days = static_cast<std::int64_t>(dates.size());
  f.weeks = static_cast<std::int64_t>(weeks.size());

  std::vector<double> gaps;
  for (std::size_t i = 1; i < commits.size(); ++i)
    gaps.push_back(static_cast<double>(commits[i].timestamp_utc - commits[i - 1].timestamp_utc) / 86400.0);
  f.timediff = median(std::move(gaps));
  f.loc_per_commit = median(std::move(locs));

  f.weekend = static_cast<double>(weekend) / n;
  f.night = static_cast<double>(parts[0]) / n;
  f.morning = static_cast<double>(parts[1]) / n;
  f.afternoon = static_cast<double>(parts[2]) / n;
  f.evening = static_cast<double>(parts[3]) / n;
  f.office = static_cast<double>(office) / n;
  f.most_active_hour =
      static_cast<int>(std::max_element(per_hour.begin(), per_hour.end()) - per_hour.begin());

  if (!weekday_hours.empty()) {
    std::sort(weekday_hours.begin(), weekday_hours.end());
    f.beginning_regular = nearest_rank(weekday_hours, 10);
    f.end_regular = nearest_rank(weekday_hours, 90);
    f.length_regular = f.end_regular - f.beginning_regular;
  }
  return f;
}

// A merged identity together with its commits (sorted by time).
struct Developer {
  Identity identity;
  std::vector<CommitRecord> commits;

  const std::string& id() const { return identity.id; }
};

inline std::vector<Developer> group_commits(const std::vector<Identity>& identities,
                                            const std::vector<CommitRecord>& records) {
  std::unordered_map<std::string_view, const CommitRecord*> by_sha;
  for (const auto& r : records) by_sha.emplace(r.sha, &r);
  std::vector<Developer> out;
  out.reserve(identities.size());
  for (const auto& ident : identities) {
    Developer d{ident, {}};
    for (const auto& sha : ident.commit_shas) {
      auto it = by_sha.find(sha);
      if (it == by_sha.end())
        throw Error(ErrorCode::schema, "identity " + ident.id + " refers to unknown commit " + sha);
      d.commits.push_back(*it->second);
    }
    if (d.commits.empty()) continue;
    d.commits = sorted_by_time(std::move(d.commits));
    out.push_back(std::move(d));
  }
  std::sort(out.begin(), out.end(), [](const Developer& a, const Developer& b) { return a.id() < b.id(); });
  return out;
}

// Labeled rows of features. Rows follow `row_ids`, columns follow `columns`.
struct FeatureMatrix {
  std::vector<std::string> row_ids;
  std::vector<std::string> columns;
  Eigen::MatrixXd values;
};

inline FeatureMatrix feature_matrix(const std::vector<Developer>& developers, FeatureMode mode) {
  std::vector<const Developer*> order;
  for (const auto& d : developers) order.push_back(&d);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->id() < b->id(); });

  FeatureMatrix m;
  m.columns = feature_columns(mode);
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < kFeatureColumns.size(); ++c)
    if (std::find(m.columns.begin(), m.columns.end(), kFeatureColumns[c]) != m.columns.end())
      keep.push_back(c);
  m.values.resize(static_cast<Eigen::Index>(order.size()), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t r = 0; r < order.size(); ++r) {
    m.row_ids.push_back(order[r]->id());
    const auto v = developer_features(order[r]->commits).values();
    for (std::size_t k = 0; k < keep.size(); ++k)
      m.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = v[keep[k]];
  }
  return m;
}

// ---------------------------------------------------------------------------
// Per-commit features.

struct CommitFeatures {
  int weekend_flag = 0;
  int hour = 0;
  int night_flag = 0;
  int morning_flag = 0;
  int afternoon_flag = 0;
  int evening_flag = 0;
  int office_flag = 0;
  double loc = 0;
  double time_since_prev = 0;
  // Author aggregates.
  double author_weekend = 0;
  double author_night = 0;
  double author_morning = 0;
  double author_afternoon = 0;
  double author_evening = 0;
  double author_office = 0;

  static constexpr std::size_t kCount = 15;

  std::array<double, kCount> values() const {
    return {static_cast<double>(weekend_flag), static_cast<double>(hour),
            static_cast<double>(night_flag),   static_cast<double>(morning_flag),
            static_cast<double>(afternoon_flag), static_cast<double>(evening_flag),
            static_cast<double>(office_flag),  loc, time_since_prev, author_weekend,
            author_night, author_morning, author_afternoon, author_evening, author_office};
  }
};

inline constexpr std::array<std::string_view, CommitFeatures::kCount> kCommitFeatureColumns = {
    "weekend_flag",   "hour",           "night_flag",    "morning_flag",  "afternoon_flag",
    "evening_flag",   "office_flag",    "loc",           "time_since_prev", "author_weekend",
    "author_night",   "author_morning", "author_afternoon", "author_evening", "author_office"};

// `commits` must be sorted by time. Missing gaps and line counts are imputed
// with the author's medians from `aggregates`.
inline std::vector<CommitFeatures> commit_features(const std::vector<CommitRecord>& commits,
                                                   const DeveloperFeatures& aggregates) {
  std::vector<CommitFeatures> out;
  out.reserve(commits.size());
  for (std::size_t i = 0; i < commits.size(); ++i) {
    const auto& c = commits[i];
    const LocalTime lt = c.local_time();
    CommitFeatures f;
    f.weekend_flag = is_weekend(lt.weekday) ? 1 : 0;
    f.hour = lt.hour;
    switch (day_part(lt.hour)) {
      case DayPart::night: f.night_flag = 1; break;
      case DayPart::morning: f.morning_flag = 1; break;
      case DayPart::afternoon: f.afternoon_flag = 1; break;
      case DayPart::evening: f.evening_flag = 1; break;
    }
    f.office_flag = lt.hour >= kOfficeFeatureStart && lt.hour < kOfficeFeatureEnd ? 1 : 0;
    f.loc = c.has_line_counts() ? static_cast<double>(c.lines_added + c.lines_deleted)
                                : aggregates.loc_per_commit;
    f.time_since_prev = i == 0 ? aggregates.timediff
                               : static_cast<double>(c.timestamp_utc - commits[i - 1].timestamp_utc) / 86400.0;
    f.author_weekend = aggregates.weekend;
    f.author_night = aggregates.night;
    f.author_morning = aggregates.morning;
    f.author_afternoon = aggregates.afternoon;
    f.author_evening = aggregates.evening;
    f.author_office = aggregates.office;
    out.push_back(f);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Features CSV: `identity,<columns...>`; integer columns as integers, other
// values with six decimals, missing values as `NA`.

inline bool is_integer_column(std::string_view name) {
  return std::find(kIntegerColumns.begin(), kIntegerColumns.end(), name) != kIntegerColumns.end();
}

inline std::string write_features_csv(const FeatureMatrix& m) {
  std::string out = "identity";
  for (const auto& c : m.columns) out += "," + c;
  out += '\n';
  for (Eigen::Index r = 0; r < m.values.rows(); ++r) {
    out += csv::escape(m.row_ids[static_cast<std::size_t>(r)]);
    for (Eigen::Index c = 0; c < m.values.cols(); ++c) {
      const double v = m.values(r, c);
      out += ',';
      if (std::isnan(v)) out += "NA";
      else if (is_integer_column(m.columns[static_cast<std::size_t>(c)]))
        out += std::to_string(static_cast<std::int64_t>(std::llround(v)));
      else out += text::format_fixed(v, 6);
    }
    out += '\n';
  }
  return out;
}

inline FeatureMatrix read_features_csv(std::istream& in, const std::string& source = "features") {
  const csv::Table t = csv::parse(in, source);
  if (t.header.empty() || t.header.front() != "identity")
    throw Error(ErrorCode::schema, source + ": first column must be `identity`");
  FeatureMatrix m;
  m.columns.assign(t.header.begin() + 1, t.header.end());
  std::set<std::string> unique(m.columns.begin(), m.columns.end());
  if (unique.size() != m.columns.size()) throw Error(ErrorCode::schema, source + ": duplicate column");
  m.values.resize(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(m.columns.size()));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    m.row_ids.push_back(t.rows[r][0]);
    for (std::size_t c = 0; c < m.columns.size(); ++c) {
      const std::string_view cell = text::trim(t.rows[r][c + 1]);
      double v = std::numeric_limits<double>::quiet_NaN();
      if (cell != "NA" && !cell.empty()) {
        auto parsed = text::parse_double(cell);
        if (!parsed || !std::isfinite(*parsed))
          throw Error(ErrorCode::schema, source + ":" + std::to_string(t.line_numbers[r]) +
                                             ": bad number in column " + m.columns[c]);
        v = *parsed;
      }
      m.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
    }
  }
  return m;
}

}  // namespace paydev
