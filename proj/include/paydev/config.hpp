#pragma once

// Run configuration. File format: one `key = value` per line, `#` starts a
// comment, blank lines ignored. Later assignments win, and command-line
// overrides are applied after the file.

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "paydev/error.hpp"
#include "paydev/features.hpp"
#include "paydev/ml/model.hpp"
#include "paydev/text.hpp"

namespace paydev {

struct Config {
  std::uint64_t seed = 1;
  std::int64_t min_commits = 100;
  FeatureMode feature_mode = FeatureMode::all;
  int folds = 10;
  int repeats = 10;
  ml::ClassifierParams classifiers;
  std::vector<std::string> email_domains{"mozilla.com"};
  double coverage = 0.5;
  std::vector<std::string> products{"Firefox", "Core", "Firefox OS", "Firefox for Android", "Thunderbird",
                                    "SeaMonkey"};
  // synth
  std::string synth_profile = "overlapping";
  int synth_developers = 200;
  double synth_hired_fraction = 0.5;
  std::int64_t synth_min_commits = 120;
  std::int64_t synth_max_commits = 400;
};

namespace detail {

inline std::vector<std::string> parse_list(std::string_view v) {
  std::vector<std::string> out;
  for (auto part : text::split(v, ',')) {
    auto t = text::trim(part);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

template <typename Int>
Int config_int(std::string_view key, std::string_view v, Int min) {
  auto n = text::parse_int<Int>(v);
  if (!n || *n < min)
    throw Error(ErrorCode::schema, "config " + std::string(key) + ": expected an integer >= " +
                                       std::to_string(min) + ", got '" + std::string(v) + "'");
  return *n;
}

inline double config_positive(std::string_view key, std::string_view v, bool allow_zero = false) {
  auto d = text::parse_double(v);
  if (!d || !(allow_zero ? *d >= 0 : *d > 0))
    throw Error(ErrorCode::schema, "config " + std::string(key) + ": expected a " +
                                       (allow_zero ? "non-negative" : "positive") + " number, got '" +
                                       std::string(v) + "'");
  return *d;
}

}  // namespace detail

inline void set_config_value(Config& c, std::string_view key, std::string_view raw) {
  using namespace detail;
  const std::string_view v = text::trim(raw);
  auto& logit = c.classifiers.logit;
  auto& tree = c.classifiers.tree;
  auto& forest = c.classifiers.forest;
  if (key == "seed") c.seed = config_int<std::uint64_t>(key, v, 0);
  else if (key == "min_commits") c.min_commits = config_int<std::int64_t>(key, v, 1);
  else if (key == "feature_mode") {
    try {
      c.feature_mode = parse_feature_mode(v);
    } catch (const Error& e) {
      throw Error(ErrorCode::schema, std::string("config feature_mode: ") + e.what());
    }
  } else if (key == "folds") c.folds = config_int<int>(key, v, 2);
  else if (key == "repeats") c.repeats = config_int<int>(key, v, 1);
  else if (key == "logit_l2") logit.l2 = config_positive(key, v, true);
  else if (key == "logit_max_iter") logit.max_iter = config_int<int>(key, v, 1);
  else if (key == "logit_tol") logit.tol = config_positive(key, v);
  else if (key == "tree_minsplit") tree.minsplit = config_int<int>(key, v, 2);
  else if (key == "tree_cp") tree.cp = config_positive(key, v, true);
  else if (key == "tree_maxdepth") tree.maxdepth = config_int<int>(key, v, 1);
  else if (key == "forest_trees") forest.trees = config_int<int>(key, v, 1);
  else if (key == "forest_mtry") forest.mtry = config_int<int>(key, v, 0);
  else if (key == "forest_threads") forest.threads = config_int<int>(key, v, 0);
  else if (key == "email_domains") c.email_domains = parse_list(text::ascii_lower(v));
  else if (key == "coverage") {
    c.coverage = config_positive(key, v);
    if (c.coverage > 1) throw Error(ErrorCode::schema, "config coverage: must be <= 1");
  } else if (key == "products") c.products = parse_list(v);
  else if (key == "synth_profile") c.synth_profile = std::string(v);
  else if (key == "synth_developers") c.synth_developers = config_int<int>(key, v, 1);
  else if (key == "synth_hired_fraction") {
    c.synth_hired_fraction = config_positive(key, v, true);
    if (c.synth_hired_fraction > 1) throw Error(ErrorCode::schema, "config synth_hired_fraction: must be <= 1");
  } else if (key == "synth_min_commits") c.synth_min_commits = config_int<std::int64_t>(key, v, 1);
  else if (key == "synth_max_commits") c.synth_max_commits = config_int<std::int64_t>(key, v, 1);
  else throw Error(ErrorCode::schema, "unknown config key '" + std::string(key) + "'");
}

// "key=value" as given on the command line.
inline void apply_override(Config& c, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos)
    throw Error(ErrorCode::usage, "expected key=value, got '" + std::string(assignment) + "'");
  set_config_value(c, text::trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

inline Config parse_config(std::istream& in, const std::string& source = "config") {
  Config c;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view s = line;
    if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = text::trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::schema, source + ":" + std::to_string(line_no) + ": expected key = value");
    try {
      set_config_value(c, text::trim(s.substr(0, eq)), s.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(e.code(), source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return c;
}

inline nlohmann::ordered_json to_json(const Config& c) {
  const auto& cl = c.classifiers;
  nlohmann::ordered_json j;
  j["seed"] = c.seed;
  j["min_commits"] = c.min_commits;
  j["feature_mode"] = to_string(c.feature_mode);
  j["folds"] = c.folds;
  j["repeats"] = c.repeats;
  j["logit_l2"] = cl.logit.l2;
  j["logit_max_iter"] = cl.logit.max_iter;
  j["logit_tol"] = cl.logit.tol;
  j["tree_minsplit"] = cl.tree.minsplit;
  j["tree_cp"] = cl.tree.cp;
  j["tree_maxdepth"] = cl.tree.maxdepth;
  j["forest_trees"] = cl.forest.trees;
  j["forest_mtry"] = cl.forest.mtry;
  j["email_domains"] = c.email_domains;
  j["coverage"] = c.coverage;
  j["products"] = c.products;
  return j;
}

// Human-readable echo, one `key = value` per line.
inline std::string config_echo(const Config& c) {
  std::string out;
  const auto j = to_json(c);
  for (const auto& [k, v] : j.items())
    out += k + " = " + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
  return out;
}

}  // namespace paydev
