#pragma once

// Brute-force reference for the per-developer metrics, written against
// <chrono> and plain loops only. Shares no code with paydev/features.hpp.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

namespace paydev::oracle {

struct RawCommit {
  std::int64_t ts;
  int offset_minutes;
  std::int64_t loc;  // -1 = unknown
};

struct Local {
  std::int64_t day_number;
  int hour;
  bool weekend;
  std::pair<int, int> iso_week;
};

inline Local local_of(const RawCommit& c) {
  namespace chr = std::chrono;
  const chr::sys_seconds t{chr::seconds{c.ts + c.offset_minutes * 60LL}};
  const chr::sys_days d = chr::floor<chr::days>(t);
  const chr::weekday wd{d};
  const chr::sys_days thursday = d - chr::days{wd.iso_encoding() - 1} + chr::days{3};
  const chr::year y = chr::year_month_day{thursday}.year();
  const int week = static_cast<int>((thursday - chr::sys_days{y / chr::January / 1}).count() / 7 + 1);
  return {d.time_since_epoch().count(), static_cast<int>(chr::hh_mm_ss{t - d}.hours().count()),
          wd == chr::Saturday || wd == chr::Sunday, {static_cast<int>(y), week}};
}

inline double sorted_median(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

// Smallest element whose rank k satisfies 100 k >= p n.
inline int percentile(std::vector<int> v, int p) {
  std::sort(v.begin(), v.end());
  for (std::size_t k = 1; k <= v.size(); ++k)
    if (100 * k >= static_cast<std::size_t>(p) * v.size()) return v[k - 1];
  return v.back();
}

// Column order: period, days, weeks, timediff, commits, loc_per_commit,
// weekend, night, morning, afternoon, evening, office, most_active_hour,
// beginning_regular, length_regular, end_regular.
inline std::array<double, 16> developer_metrics(std::vector<RawCommit> commits) {
  std::stable_sort(commits.begin(), commits.end(), [](auto& a, auto& b) { return a.ts < b.ts; });
  const double n = static_cast<double>(commits.size());
  std::vector<Local> loc;
  for (const auto& c : commits) loc.push_back(local_of(c));

  std::int64_t first = loc[0].day_number, last = loc[0].day_number;
  std::set<std::int64_t> days;
  std::set<std::pair<int, int>> weeks;
  int weekend = 0, night = 0, morning = 0, afternoon = 0, evening = 0, office = 0;
  int per_hour[24] = {};
  std::vector<int> weekday_hours;
  for (const auto& l : loc) {
    first = std::min(first, l.day_number);
    last = std::max(last, l.day_number);
    days.insert(l.day_number);
    weeks.insert(l.iso_week);
    weekend += l.weekend;
    night += l.hour < 6;
    morning += l.hour >= 6 && l.hour < 12;
    afternoon += l.hour >= 12 && l.hour < 18;
    evening += l.hour >= 18;
    office += l.hour >= 8 && l.hour < 17;
    ++per_hour[l.hour];
    if (!l.weekend) weekday_hours.push_back(l.hour);
  }
  std::vector<double> gaps, locs;
  for (std::size_t i = 1; i < commits.size(); ++i) gaps.push_back((commits[i].ts - commits[i - 1].ts) / 86400.0);
  for (const auto& c : commits)
    if (c.loc >= 0) locs.push_back(static_cast<double>(c.loc));
  int best = 0;
  for (int h = 1; h < 24; ++h)
    if (per_hour[h] > per_hour[best]) best = h;
  const int begin = weekday_hours.empty() ? 0 : percentile(weekday_hours, 10);
  const int end = weekday_hours.empty() ? 0 : percentile(weekday_hours, 90);
  return {static_cast<double>(last - first), static_cast<double>(days.size()), static_cast<double>(weeks.size()),
          sorted_median(gaps), n, sorted_median(locs), weekend / n, night / n, morning / n, afternoon / n,
          evening / n, office / n, static_cast<double>(best), static_cast<double>(begin),
          static_cast<double>(end - begin), static_cast<double>(end)};
}

// The documented four-commit fixture at a +01:00 offset:
//   Mon 2017-01-02 09:00 (loc 10), Mon 14:30 (loc 4), Sat 2017-01-07 22:00
//   (loc 6), Sun 2017-01-08 02:00 (loc 2).
inline std::vector<RawCommit> fixture() {
  namespace chr = std::chrono;
  auto at = [](int d, int h, int m) {
    const auto local = chr::sys_days{chr::year{2017} / chr::January / d} + chr::hours{h} + chr::minutes{m};
    return chr::duration_cast<chr::seconds>(local.time_since_epoch()).count() - 3600;
  };
  return {{at(2, 9, 0), 60, 10}, {at(2, 14, 30), 60, 4}, {at(7, 22, 0), 60, 6}, {at(8, 2, 0), 60, 2}};
}

// Hand-computed values for the fixture, in column order.
inline constexpr std::array<double, 16> kFixtureExpected = {
    6, 3, 1, 0.2292, 4, 5, 0.5, 0.25, 0.25, 0.25, 0.25, 0.5, 2, 9, 5, 14};

}  // namespace paydev::oracle
