#pragma once

// Ground-truth employment status: loading, the commit-count study filter, and
// resolution of developers who contributed both as volunteers and as hires.

#include <algorithm>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "paydev/civil_time.hpp"
#include "paydev/csv.hpp"
#include "paydev/error.hpp"
#include "paydev/features.hpp"

namespace paydev {

enum class Status { volunteer = 0, hired = 1 };

inline std::string_view to_string(Status s) { return s == Status::hired ? "hired" : "volunteer"; }

// Closed interval of dates; a missing bound is open.
struct HiredPeriod {
  std::optional<CivilDate> from;
  std::optional<CivilDate> to;

  bool contains(const CivilDate& d) const { return (!from || *from <= d) && (!to || d <= *to); }

  bool overlaps(const HiredPeriod& o) const {
    const bool this_before = to && o.from && *to < *o.from;
    const bool other_before = o.to && from && *o.to < *from;
    return !this_before && !other_before;
  }
};

struct LabelEntry {
  Status status = Status::volunteer;
  std::vector<HiredPeriod> periods;
};

struct LabelSet {
  std::map<std::string, LabelEntry> entries;

  // Lookup by identity id first, then by the identity's emails and names.
  const LabelEntry* find(const Identity& identity) const {
    if (auto it = entries.find(identity.id); it != entries.end()) return &it->second;
    for (const auto& e : identity.emails)
      if (auto it = entries.find(e); it != entries.end()) return &it->second;
    for (const auto& n : identity.names)
      if (auto it = entries.find(n); it != entries.end()) return &it->second;
    return nullptr;
  }
};

// CSV header `identity,status,hired_from,hired_to`. Several rows per identity
// list several hired periods; all rows of one identity must agree on status.
inline LabelSet load_labels(std::istream& in, const std::string& source = "labels") {
  const csv::Table t = csv::parse(in, source);
  LabelSet set;
  if (t.header.empty() && t.rows.empty()) return set;
  csv::expect_header(t, {"identity", "status", "hired_from", "hired_to"}, source);
  std::map<std::string, bool> seen;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    const std::string where = source + ":" + std::to_string(t.line_numbers[i]) + ": ";
    const std::string id(text::trim(row[0]));
    if (id.empty()) throw Error(ErrorCode::schema, where + "empty identity");
    const std::string_view status = text::trim(row[1]);
    Status s;
    if (status == "hired") s = Status::hired;
    else if (status == "volunteer") s = Status::volunteer;
    else throw Error(ErrorCode::schema, where + "status must be hired or volunteer, got '" +
                                            std::string(status) + "'");
    HiredPeriod p;
    for (int k = 0; k < 2; ++k) {
      const std::string_view cell = text::trim(row[2 + static_cast<std::size_t>(k)]);
      if (cell.empty()) continue;
      auto d = parse_iso_date(cell);
      if (!d) throw Error(ErrorCode::schema, where + "malformed date '" + std::string(cell) + "'");
      (k == 0 ? p.from : p.to) = *d;
    }
    if (p.from && p.to && *p.to < *p.from)
      throw Error(ErrorCode::schema, where + "hired_to precedes hired_from");

    auto [it, inserted] = set.entries.try_emplace(id);
    LabelEntry& entry = it->second;
    if (inserted) entry.status = s;
    else if (entry.status != s)
      throw Error(ErrorCode::schema, where + "conflicting status for " + id);
    if (p.from || p.to) {
      for (const auto& q : entry.periods)
        if (q.overlaps(p)) throw Error(ErrorCode::schema, where + "overlapping hired periods for " + id);
      entry.periods.push_back(p);
    }
  }
  return set;
}

// Developers with strictly more than `min_commits` commits.
inline std::vector<Developer> study_filter(const std::vector<Developer>& developers,
                                           std::int64_t min_commits = 100) {
  if (min_commits < 1) throw Error(ErrorCode::usage, "min_commits must be >= 1");
  std::vector<Developer> out;
  for (const auto& d : developers)
    if (static_cast<std::int64_t>(d.commits.size()) > min_commits) out.push_back(d);
  return out;
}

// Per-commit status from hired periods. Empty when the entry has no periods.
inline std::vector<Status> period_statuses(const Developer& dev, const LabelEntry& entry) {
  std::vector<Status> out;
  if (entry.periods.empty()) return out;
  out.reserve(dev.commits.size());
  for (const auto& c : dev.commits) {
    const CivilDate d = c.local_time().date;
    const bool hired = std::any_of(entry.periods.begin(), entry.periods.end(),
                                   [&](const HiredPeriod& p) { return p.contains(d); });
    out.push_back(hired ? Status::hired : Status::volunteer);
  }
  return out;
}

// Single label for a developer. With hired periods the majority of commits
// decides (an exact tie counts as hired); otherwise the listed status.
// nullopt: no label.
inline std::optional<Status> resolve_mixed(const Developer& dev, const LabelSet& labels) {
  const LabelEntry* entry = labels.find(dev.identity);
  if (!entry) return std::nullopt;
  const auto per_commit = period_statuses(dev, *entry);
  if (per_commit.empty()) return entry->status;
  const auto hired = std::count(per_commit.begin(), per_commit.end(), Status::hired);
  return 2 * hired >= static_cast<std::ptrdiff_t>(per_commit.size()) ? Status::hired : Status::volunteer;
}

inline std::vector<Status> commit_labels(const Developer& dev, const LabelSet& labels) {
  const LabelEntry* entry = labels.find(dev.identity);
  if (!entry) throw Error(ErrorCode::schema, "no label for developer " + dev.id());
  auto per_commit = period_statuses(dev, *entry);
  if (!per_commit.empty()) return per_commit;
  return std::vector<Status>(dev.commits.size(), entry->status);
}

struct LabelReport {
  std::size_t hired = 0;
  std::size_t volunteer = 0;
  std::size_t unlabeled = 0;
};

struct LabeledDevelopers {
  std::vector<Developer> developers;  // labeled only, sorted by id
  std::vector<Status> status;
  LabelReport report;
};

inline LabeledDevelopers attach_labels(const std::vector<Developer>& developers, const LabelSet& labels) {
  LabeledDevelopers out;
  for (const auto& d : developers) {
    auto s = resolve_mixed(d, labels);
    if (!s) {
      ++out.report.unlabeled;
      continue;
    }
    (*s == Status::hired ? out.report.hired : out.report.volunteer)++;
    out.developers.push_back(d);
    out.status.push_back(*s);
  }
  return out;
}

}  // namespace paydev
