#pragma once

// Issue-identifier linking and product filtering.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "paydev/csv.hpp"
#include "paydev/error.hpp"
#include "paydev/ingest.hpp"
#include "paydev/text.hpp"

namespace paydev {

struct IssueLink {
  std::string sha;
  std::uint64_t issue_id = 0;
  bool operator==(const IssueLink&) const = default;
};

using ProductMap = std::map<std::uint64_t, std::string>;

// Issue ids mentioned in `message`: case-insensitive `bug`, optional blanks,
// optional `#`, optional blanks, then 3 to 9 digits not followed by another
// digit. First-occurrence order, duplicates removed.
inline std::vector<std::uint64_t> extract_issue_ids(std::string_view message) {
  std::vector<std::uint64_t> ids;
  const auto lower = [](char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c; };
  const auto digit = [](char c) { return c >= '0' && c <= '9'; };
  const auto blank = [](char c) { return c == ' ' || c == '\t'; };
  const std::size_t n = message.size();
  for (std::size_t i = 0; i + 3 <= n; ++i) {
    if (lower(message[i]) != 'b' || lower(message[i + 1]) != 'u' || lower(message[i + 2]) != 'g')
      continue;
    std::size_t p = i + 3;
    while (p < n && blank(message[p])) ++p;
    if (p < n && message[p] == '#') {
      ++p;
      while (p < n && blank(message[p])) ++p;
    }
    std::size_t d = p;
    while (d < n && digit(message[d])) ++d;
    const std::size_t len = d - p;
    if (len < 3 || len > 9) continue;
    std::uint64_t id = 0;
    for (std::size_t k = p; k < d; ++k) id = id * 10 + static_cast<std::uint64_t>(message[k] - '0');
    if (id == 0) continue;
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
  }
  return ids;
}

inline std::vector<IssueLink> link_commits(const std::vector<CommitRecord>& records) {
  std::vector<IssueLink> links;
  for (const auto& r : records)
    for (std::uint64_t id : extract_issue_ids(r.message)) links.push_back({r.sha, id});
  return links;
}

// CSV with header `issue_id,product`.
inline ProductMap load_product_map(std::istream& in, const std::string& source = "product map") {
  const csv::Table t = csv::parse(in, source);
  if (t.header.empty() && t.rows.empty()) return {};
  csv::expect_header(t, {"issue_id", "product"}, source);
  ProductMap map;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::string where = source + ":" + std::to_string(t.line_numbers[i]) + ": ";
    auto id = text::parse_int<std::uint64_t>(text::trim(t.rows[i][0]));
    if (!id || *id == 0) throw Error(ErrorCode::schema, where + "invalid issue id");
    if (!map.emplace(*id, t.rows[i][1]).second)
      throw Error(ErrorCode::schema, where + "duplicate issue id " + std::to_string(*id));
  }
  return map;
}

struct LinkageCounts {
  std::size_t total = 0;
  std::size_t linked = 0;    // carries at least one issue id
  std::size_t unmapped = 0;  // linked, but primary issue absent from the map
  std::size_t kept = 0;
};

struct FilterResult {
  std::vector<CommitRecord> kept;
  LinkageCounts counts;
};

// Keeps commits whose primary (first) issue maps to an allowed product.
inline FilterResult filter_by_products(const std::vector<CommitRecord>& records,
                                       const std::vector<IssueLink>& links, const ProductMap& map,
                                       const std::set<std::string>& allowed) {
  if (allowed.empty()) throw Error(ErrorCode::usage, "product allowlist is empty");
  std::map<std::string_view, std::uint64_t> primary;
  for (const auto& l : links) primary.emplace(l.sha, l.issue_id);

  FilterResult out;
  out.counts.total = records.size();
  for (const auto& r : records) {
    auto it = primary.find(r.sha);
    if (it == primary.end()) continue;
    ++out.counts.linked;
    auto product = map.find(it->second);
    if (product == map.end()) {
      ++out.counts.unmapped;
      continue;
    }
    if (allowed.contains(product->second)) out.kept.push_back(r);
  }
  out.counts.kept = out.kept.size();
  return out;
}

inline FilterResult filter_by_products(const std::vector<CommitRecord>& records, const ProductMap& map,
                                       const std::set<std::string>& allowed) {
  return filter_by_products(records, link_commits(records), map, allowed);
}

}  // namespace paydev
