#pragma once

// Synthetic commit histories with known employment status. Each developer
// draws a personal weekday propensity and a share of commits in the class's
// "core" hours from per-class ranges; commit hours come from the core hour
// weights with that share and from the background weights otherwise.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "paydev/civil_time.hpp"
#include "paydev/error.hpp"
#include "paydev/ingest.hpp"
#include "paydev/labels.hpp"
#include "paydev/rng.hpp"
#include "paydev/text.hpp"

namespace paydev::eval {

struct Range {
  double lo = 0, hi = 0;
  double draw(Rng& rng) const { return lo + (hi - lo) * rng.uniform(); }
};

struct BehaviorProfile {
  Range weekday_share{5.0 / 7.0, 5.0 / 7.0};  // probability a commit falls on Mon..Fri
  Range core_share{1, 1};                     // probability its hour comes from `core_hours`
  std::array<double, 24> core_hours{};
  std::array<double, 24> background_hours{};
  double company_email_share = 0;  // per-commit chance of the company address
  std::vector<int> tz_offsets{0};  // minutes; one is picked per developer
};

struct SynthSpec {
  int developers = 200;
  double hired_fraction = 0.5;
  std::int64_t min_commits = 120;
  std::int64_t max_commits = 400;
  std::string company_domain = "mozilla.com";
  BehaviorProfile hired;
  BehaviorProfile volunteer;
};

struct SynthCorpus {
  std::vector<CommitRecord> records;  // sorted by (timestamp, sha)
  std::vector<std::string> ids;       // developer ids (smallest email)
  std::vector<Status> status;         // parallel to ids
};

inline std::array<double, 24> hours_between(int from, int to) {  // [from, to), wrapping at midnight
  std::array<double, 24> w{};
  const int len = ((to - from) % 24 + 24) % 24;
  for (int i = 0; i < len; ++i) w[static_cast<std::size_t>((from + i) % 24)] = 1;
  return w;
}

inline std::array<double, 24> all_hours() {
  std::array<double, 24> w{};
  w.fill(1);
  return w;
}

// Presets:
//   separable    disjoint hour windows (office vs night), distinct weekday use
//   overlapping  hired mostly weekday office hours, volunteers mostly
//                evenings and weekends, with per-developer spread so the
//                classes overlap
//   weekend      identical hour profiles; only weekend activity differs
inline SynthSpec synth_preset(std::string_view name) {
  SynthSpec s;
  const std::vector<int> zones{-480, -300, 0, 60, 120, 330, 540};
  s.hired.tz_offsets = zones;
  s.volunteer.tz_offsets = zones;
  if (name == "separable") {
    s.hired.weekday_share = {0.92, 1.0};
    s.hired.core_hours = hours_between(9, 17);
    s.hired.company_email_share = 0.3;
    s.volunteer.weekday_share = {0.3, 0.6};
    s.volunteer.core_hours = hours_between(19, 3);
  } else if (name == "overlapping") {
    // Both classes mix office-hour and off-hour activity; the per-developer
    // mixing ranges overlap, so no single threshold separates them.
    for (auto* p : {&s.hired, &s.volunteer}) {
      p->core_hours = hours_between(9, 17);
      p->background_hours = hours_between(17, 9);
    }
    s.hired.weekday_share = {0.7, 0.97};
    s.hired.core_share = {0.3, 0.95};
    s.hired.company_email_share = 0.2;
    s.volunteer.weekday_share = {0.55, 0.9};
    s.volunteer.core_share = {0.05, 0.7};
    s.volunteer.company_email_share = 0.002;
  } else if (name == "weekend") {
    s.hired.weekday_share = {1.0, 1.0};
    s.hired.core_hours = all_hours();
    s.volunteer.weekday_share = {0.35, 0.6};
    s.volunteer.core_hours = all_hours();
  } else {
    throw Error(ErrorCode::usage, "unknown synthetic profile '" + std::string(name) +
                                      "' (separable, overlapping, weekend)");
  }
  return s;
}

namespace detail {

inline std::string random_sha(Rng& rng) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s(40, '0');
  for (auto& c : s) c = kHex[rng.below(16)];
  return s;
}

inline std::size_t draw_hour(Rng& rng, const std::array<double, 24>& w) {
  return rng.weighted(std::vector<double>(w.begin(), w.end()));
}

}  // namespace detail

inline SynthCorpus generate_synthetic_corpus(const SynthSpec& spec, std::uint64_t seed) {
  if (spec.developers < 1) throw Error(ErrorCode::usage, "synthetic corpus needs at least one developer");
  if (!(spec.hired_fraction >= 0 && spec.hired_fraction <= 1))
    throw Error(ErrorCode::usage, "hired fraction must lie in [0, 1]");
  if (spec.min_commits < 1 || spec.max_commits < spec.min_commits)
    throw Error(ErrorCode::usage, "need 1 <= min commits <= max commits");

  Rng rng(seed);
  const auto n = static_cast<std::size_t>(spec.developers);
  const auto n_hired = static_cast<std::size_t>(std::llround(spec.hired_fraction * static_cast<double>(n)));
  std::vector<Status> status(n, Status::volunteer);
  for (std::size_t i = 0; i < n_hired; ++i) status[i] = Status::hired;
  rng.shuffle(status);

  const std::int64_t epoch_day = days_from_civil(2012, 1, 1);
  SynthCorpus out;
  out.status = status;
  std::set<std::string> shas;
  for (std::size_t d = 0; d < n; ++d) {
    Rng dev(derive_seed(seed, {0x646576ULL, d}));
    const BehaviorProfile& p = status[d] == Status::hired ? spec.hired : spec.volunteer;
    const double weekday_share = p.weekday_share.draw(dev);
    const double core_share = p.core_share.draw(dev);
    const int offset = p.tz_offsets[dev.below(p.tz_offsets.size())];
    const std::int64_t first_day = epoch_day + dev.between(0, 1500);
    const std::int64_t span = dev.between(90, 900);
    const auto commits = dev.between(spec.min_commits, spec.max_commits);

    char tag[24];
    std::snprintf(tag, sizeof tag, "%04zu", d);
    const std::string name = std::string("Developer ") + tag;
    const std::string personal = std::string("dev") + tag + "@example.org";
    const std::string company = std::string("dev") + tag + "@" + text::ascii_lower(spec.company_domain);
    std::string id = personal;

    for (std::int64_t k = 0; k < commits; ++k) {
      const bool want_weekday = dev.bernoulli(weekday_share);
      std::int64_t day = first_day + dev.between(0, span);
      for (int tries = 0; tries < 64 && is_weekend(weekday_from_days(day)) == want_weekday; ++tries)
        day = first_day + dev.between(0, span);
      // If the window never yields the wanted kind of day, step to the nearest one.
      while (is_weekend(weekday_from_days(day)) == want_weekday) ++day;
      const auto& hours = dev.bernoulli(core_share) ? p.core_hours : p.background_hours;
      const auto hour = static_cast<std::int64_t>(detail::draw_hour(dev, hours));
      const std::int64_t local = day * 86400 + hour * 3600 + dev.between(0, 3599);

      CommitRecord r;
      do r.sha = detail::random_sha(dev);
      while (!shas.insert(r.sha).second);
      r.author_name = name;
      r.author_email = dev.bernoulli(p.company_email_share) ? company : personal;
      id = std::min(id, r.author_email);
      r.tz_offset_minutes = offset;
      r.timestamp_utc = local - static_cast<std::int64_t>(offset) * 60;
      if (dev.bernoulli(0.02)) {
        r.lines_added = r.lines_deleted = -1;  // binary-only change
      } else {
        r.lines_added = dev.between(0, 300);
        r.lines_deleted = dev.between(0, 120);
      }
      r.message = "Bug " + std::to_string(dev.between(100000, 999999)) + " - synthetic change " +
                  std::to_string(k);
      out.records.push_back(std::move(r));
    }
    out.ids.push_back(id);
  }
  std::sort(out.records.begin(), out.records.end(), [](const CommitRecord& a, const CommitRecord& b) {
    return a.timestamp_utc != b.timestamp_utc ? a.timestamp_utc < b.timestamp_utc : a.sha < b.sha;
  });
  return out;
}

// Labels CSV keyed by developer id, no hired periods.
inline std::string labels_csv(const SynthCorpus& c) {
  std::ostringstream out;
  out << "identity,status,hired_from,hired_to\n";
  for (std::size_t i = 0; i < c.ids.size(); ++i) out << c.ids[i] << ',' << to_string(c.status[i]) << ",,\n";
  return out.str();
}

}  // namespace paydev::eval
