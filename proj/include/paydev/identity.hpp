#pragma once

// Author identity merging. Distinct names and emails are nodes of an alias
// graph, each observed (name, email) pair is an edge, and connected components
// become developers. A manual overrides file then forces merges or detaches
// aliases that the automatic step got wrong.

#include <algorithm>
#include <iomanip>
#include <istream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "paydev/error.hpp"
#include "paydev/ingest.hpp"
#include "paydev/text.hpp"

namespace paydev {

struct Identity {
  std::string id;
  std::set<std::string> names;
  std::set<std::string> emails;
  std::set<std::string> commit_shas;
  bool operator==(const Identity&) const = default;
};

struct OverrideRule {
  enum class Kind { merge, split };
  Kind kind = Kind::merge;
  std::vector<std::string> keys;
};

struct MergeResult {
  std::vector<Identity> identities;  // sorted by id
  std::vector<std::string> warnings;
};

inline std::string normalize_name(std::string_view name) { return text::collapse_whitespace(name); }

// `merge key1|key2|...` or `split key1|...`, one rule per line, `#` comments.
inline std::vector<OverrideRule> parse_overrides(std::istream& in) {
  std::vector<OverrideRule> rules;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view l = line;
    if (auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
    l = text::trim(l);
    if (l.empty()) continue;
    const std::size_t sp = l.find_first_of(" \t");
    const std::string_view verb = l.substr(0, sp);
    OverrideRule rule;
    if (verb == "merge") rule.kind = OverrideRule::Kind::merge;
    else if (verb == "split") rule.kind = OverrideRule::Kind::split;
    else
      throw Error(ErrorCode::schema, "overrides line " + std::to_string(line_no) +
                                         ": unknown rule '" + std::string(verb) + "'");
    if (sp != std::string_view::npos) {
      for (std::string_view key : text::split(l.substr(sp + 1), '|')) {
        key = text::trim(key);
        if (key.empty())
          throw Error(ErrorCode::schema, "overrides line " + std::to_string(line_no) + ": empty key");
        rule.keys.emplace_back(key);
      }
    }
    if (rule.keys.empty())
      throw Error(ErrorCode::schema, "overrides line " + std::to_string(line_no) + ": no keys");
    rules.push_back(std::move(rule));
  }
  return rules;
}

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

// Node table for the alias graph. Names and emails live in separate key
// spaces; "" is never a node except as the name of fully anonymous commits.
struct AliasNodes {
  std::map<std::string, std::size_t> by_email, by_name;
  std::size_t count = 0;

  std::size_t add(std::map<std::string, std::size_t>& table, const std::string& key) {
    auto [it, inserted] = table.emplace(key, count);
    if (inserted) ++count;
    return it->second;
  }

  // Nodes a manual key refers to: the email with that spelling and/or the name.
  std::vector<std::size_t> lookup(const std::string& key) const {
    std::vector<std::size_t> out;
    if (auto it = by_email.find(text::ascii_lower(key)); it != by_email.end()) out.push_back(it->second);
    if (auto it = by_name.find(normalize_name(key)); it != by_name.end()) out.push_back(it->second);
    return out;
  }
};

inline bool matches_key(const CommitRecord& r, const std::string& key) {
  return (!r.author_email.empty() && r.author_email == text::ascii_lower(key)) ||
         normalize_name(r.author_name) == normalize_name(key);
}

}  // namespace detail

inline MergeResult merge_identities(const std::vector<CommitRecord>& records,
                                    const std::vector<OverrideRule>& overrides) {
  MergeResult result;

  // A key may not be both merged and split, nor split twice.
  {
    std::map<std::string, OverrideRule::Kind> seen;
    std::set<std::string> split_keys;
    for (const auto& rule : overrides) {
      for (const auto& key : rule.keys) {
        const std::string k = normalize_name(key);
        if (rule.kind == OverrideRule::Kind::split && !split_keys.insert(k).second)
          throw Error(ErrorCode::schema, "key '" + key + "' appears in two split rules");
        auto [it, inserted] = seen.emplace(k, rule.kind);
        if (!inserted && it->second != rule.kind)
          throw Error(ErrorCode::schema, "conflicting merge/split overrides on key '" + key + "'");
      }
    }
  }

  // Split rules claim their commits first.
  std::vector<const OverrideRule*> splits;
  for (const auto& rule : overrides)
    if (rule.kind == OverrideRule::Kind::split) splits.push_back(&rule);
  std::vector<int> split_of(records.size(), -1);
  std::vector<bool> split_used(splits.size(), false);
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (std::size_t s = 0; s < splits.size() && split_of[i] < 0; ++s) {
      for (const auto& key : splits[s]->keys) {
        if (detail::matches_key(records[i], key)) {
          split_of[i] = static_cast<int>(s);
          split_used[s] = true;
          break;
        }
      }
    }
  }
  for (std::size_t s = 0; s < splits.size(); ++s)
    if (!split_used[s])
      result.warnings.push_back("split override never matched: " + splits[s]->keys.front());

  // Alias graph over the remaining commits.
  detail::AliasNodes nodes;
  std::vector<std::size_t> commit_node(records.size());
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (split_of[i] >= 0) continue;
    const auto& r = records[i];
    const std::string name = normalize_name(r.author_name);
    const bool has_email = !r.author_email.empty();
    const bool has_name = !name.empty() || !has_email;
    std::size_t e = 0, n = 0;
    if (has_email) e = nodes.add(nodes.by_email, r.author_email);
    if (has_name) n = nodes.add(nodes.by_name, name);
    commit_node[i] = has_email ? e : n;
    if (has_email && has_name) edges.emplace_back(e, n);
  }
  detail::DisjointSets sets(nodes.count);
  for (auto [a, b] : edges) sets.unite(a, b);

  for (const auto& rule : overrides) {
    if (rule.kind != OverrideRule::Kind::merge) continue;
    std::vector<std::size_t> targets;
    for (const auto& key : rule.keys) {
      auto found = nodes.lookup(key);
      if (found.empty()) result.warnings.push_back("merge override key never observed: " + key);
      targets.insert(targets.end(), found.begin(), found.end());
    }
    for (std::size_t t = 1; t < targets.size(); ++t) sets.unite(targets[0], targets[t]);
  }

  // Collect groups: automatic components keyed by root, split groups after.
  std::map<std::size_t, Identity> components;
  std::vector<Identity> split_groups(splits.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    Identity& target = split_of[i] >= 0 ? split_groups[static_cast<std::size_t>(split_of[i])]
                                        : components[sets.find(commit_node[i])];
    const std::string name = normalize_name(r.author_name);
    if (!r.author_email.empty()) target.emails.insert(r.author_email);
    if (!name.empty() || r.author_email.empty()) target.names.insert(name);
    target.commit_shas.insert(r.sha);
  }

  std::vector<Identity> all;
  for (auto& [_, ident] : components) all.push_back(std::move(ident));
  for (auto& ident : split_groups)
    if (!ident.commit_shas.empty()) all.push_back(std::move(ident));

  std::set<std::string> used_ids;
  for (auto& ident : all) {
    std::string base = !ident.emails.empty() ? *ident.emails.begin() : *ident.names.begin();
    std::string id = base;
    // Only a split can produce two groups with the same smallest alias.
    for (int k = 2; !used_ids.insert(id).second; ++k) id = base + "~" + std::to_string(k);
    ident.id = std::move(id);
  }
  std::sort(all.begin(), all.end(), [](const Identity& a, const Identity& b) { return a.id < b.id; });
  result.identities = std::move(all);
  return result;
}

struct IdentityReportRow {
  std::string id;
  std::size_t aliases = 0;
  std::size_t commits = 0;
};

// Rows by commit count descending, id ascending.
inline std::vector<IdentityReportRow> identity_report(const std::vector<Identity>& identities) {
  std::vector<IdentityReportRow> rows;
  rows.reserve(identities.size());
  for (const auto& i : identities)
    rows.push_back({i.id, i.names.size() + i.emails.size(), i.commit_shas.size()});
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.commits != b.commits ? a.commits > b.commits : a.id < b.id;
  });
  return rows;
}

inline std::string format_identity_report(const std::vector<IdentityReportRow>& rows) {
  std::size_t width = std::string_view("identity").size();
  for (const auto& r : rows) width = std::max(width, r.id.size());
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(width)) << "identity" << std::right
      << std::setw(9) << "aliases" << std::setw(9) << "commits" << '\n';
  for (const auto& r : rows)
    out << std::left << std::setw(static_cast<int>(width)) << r.id << std::right << std::setw(9)
        << r.aliases << std::setw(9) << r.commits << '\n';
  return out.str();
}

// Identity map file: one JSON object per line.
inline std::string write_identity_map(const std::vector<Identity>& identities) {
  std::string out;
  for (const auto& i : identities) {
    nlohmann::ordered_json j;
    j["id"] = i.id;
    j["names"] = i.names;
    j["emails"] = i.emails;
    j["commit_shas"] = i.commit_shas;
    out += j.dump();
    out += '\n';
  }
  return out;
}

inline std::vector<Identity> read_identity_map(std::istream& in) {
  std::vector<Identity> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const std::string where = "identity map line " + std::to_string(line_no) + ": ";
    try {
      auto j = nlohmann::json::parse(line);
      Identity i;
      i.id = j.at("id").get<std::string>();
      i.names = j.at("names").get<std::set<std::string>>();
      i.emails = j.at("emails").get<std::set<std::string>>();
      i.commit_shas = j.at("commit_shas").get<std::set<std::string>>();
      out.push_back(std::move(i));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::schema, where + e.what());
    }
  }
  return out;
}

}  // namespace paydev
