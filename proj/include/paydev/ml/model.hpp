#pragma once

// A trained classifier with the column schema and imputation it was fitted
// with, plus its file format:
//
//   PAYDEVMODEL/1\n
//   {"kind": "...", "level": "...", "columns": [...], "imputer": [...], ...}\n
//
// Doubles are written in shortest round-trip form, so load(save(m)) == m.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "paydev/error.hpp"
#include "paydev/ml/dataset.hpp"
#include "paydev/ml/forest.hpp"
#include "paydev/ml/logit.hpp"
#include "paydev/ml/tree.hpp"
#include "paydev/text.hpp"

namespace paydev::ml {

inline constexpr std::string_view kModelMagic = "PAYDEVMODEL/1";

enum class ClassifierKind { logit, rpart, randomforest };

inline std::string_view to_string(ClassifierKind k) {
  switch (k) {
    case ClassifierKind::logit: return "logit";
    case ClassifierKind::rpart: return "rpart";
    case ClassifierKind::randomforest: return "randomforest";
  }
  return "?";
}

inline ClassifierKind parse_classifier(std::string_view s) {
  if (s == "logit") return ClassifierKind::logit;
  if (s == "rpart") return ClassifierKind::rpart;
  if (s == "randomforest") return ClassifierKind::randomforest;
  throw Error(ErrorCode::usage, "unknown classifier '" + std::string(s) + "'");
}

struct ClassifierParams {
  LogitOptions logit;
  TreeOptions tree;
  ForestOptions forest;
};

struct TrainedModel {
  ClassifierKind kind = ClassifierKind::logit;
  std::string level = "developer";  // or "commit"
  std::vector<std::string> columns;
  Imputer imputer;
  std::variant<LogitModel, TreeModel, ForestModel> model;
};

inline TrainedModel train(ClassifierKind kind, const Dataset& data, const ClassifierParams& params) {
  TrainedModel m;
  m.kind = kind;
  m.columns = data.columns;
  m.imputer = Imputer::fit(data.x);
  Dataset filled = data;
  m.imputer.apply(filled.x);
  check_trainable(filled);
  switch (kind) {
    case ClassifierKind::logit: m.model = fit_logit(filled.x, filled.y, params.logit); break;
    case ClassifierKind::rpart: m.model = fit_tree(filled.x, filled.y, params.tree); break;
    case ClassifierKind::randomforest: m.model = fit_forest(filled.x, filled.y, params.forest); break;
  }
  return m;
}

// Probability of the positive class for each row of `x`, whose columns are
// named by `columns` (any order; the set must match the model's).
inline Eigen::VectorXd predict_proba(const TrainedModel& m, const std::vector<std::string>& columns,
                                     const Eigen::MatrixXd& x) {
  Eigen::MatrixXd aligned = align_columns(m.columns, columns, x);
  m.imputer.apply(aligned);
  return std::visit([&](const auto& model) { return predict_proba(model, aligned); }, m.model);
}

inline int classify(double probability) { return probability >= 0.5 ? 1 : 0; }

// ---------------------------------------------------------------------------
// Serialization.

namespace detail {

inline nlohmann::json tree_to_json(const TreeModel& t) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : t.nodes)
    nodes.push_back({n.feature, n.threshold, n.left, n.right, n.n, n.n_hired, n.gini_decrease});
  return {{"cp", t.cp}, {"nodes", nodes}};
}

inline TreeModel tree_from_json(const nlohmann::json& j) {
  TreeModel t;
  t.cp = j.at("cp").get<double>();
  for (const auto& a : j.at("nodes")) {
    TreeNode n;
    n.feature = a.at(0).get<int>();
    n.threshold = a.at(1).get<double>();
    n.left = a.at(2).get<int>();
    n.right = a.at(3).get<int>();
    n.n = a.at(4).get<std::int64_t>();
    n.n_hired = a.at(5).get<std::int64_t>();
    n.gini_decrease = a.at(6).get<double>();
    t.nodes.push_back(n);
  }
  const auto count = static_cast<int>(t.nodes.size());
  if (count == 0) throw Error(ErrorCode::schema, "model: empty tree");
  for (const auto& n : t.nodes)
    if (!n.is_leaf() && (n.left <= 0 || n.right <= 0 || n.left >= count || n.right >= count))
      throw Error(ErrorCode::schema, "model: dangling tree node index");
  return t;
}

}  // namespace detail

inline std::string save_model(const TrainedModel& m) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(m.kind);
  j["level"] = m.level;
  j["columns"] = m.columns;
  j["imputer"] = m.imputer.medians;
  std::visit(
      [&](const auto& model) {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, LogitModel>) {
          j["logit"] = {{"means", model.means}, {"sds", model.sds}, {"weights", model.weights},
                        {"intercept", model.intercept}, {"iterations", model.iterations},
                        {"converged", model.converged}};
        } else if constexpr (std::is_same_v<T, TreeModel>) {
          j["tree"] = detail::tree_to_json(model);
        } else {
          nlohmann::json trees = nlohmann::json::array();
          for (const auto& t : model.trees) trees.push_back(detail::tree_to_json(t));
          j["forest"] = {{"mtry", model.mtry}, {"seed", model.seed}, {"bootstrap", model.bootstrap},
                         {"tree_seeds", model.tree_seeds}, {"trees", trees}};
        }
      },
      m.model);
  return std::string(kModelMagic) + "\n" + j.dump() + "\n";
}

inline TrainedModel load_model(std::istream& in) {
  std::string magic;
  std::getline(in, magic);
  if (text::trim(magic) != kModelMagic)
    throw Error(ErrorCode::schema, "not a paydev model file (bad magic)");
  try {
    nlohmann::json j;
    in >> j;
    TrainedModel m;
    m.kind = parse_classifier(j.at("kind").get<std::string>());
    m.level = j.at("level").get<std::string>();
    m.columns = j.at("columns").get<std::vector<std::string>>();
    m.imputer.medians = j.at("imputer").get<std::vector<double>>();
    if (m.imputer.medians.size() != m.columns.size())
      throw Error(ErrorCode::schema, "model: imputer/columns size mismatch");
    switch (m.kind) {
      case ClassifierKind::logit: {
        const auto& l = j.at("logit");
        LogitModel lm;
        lm.means = l.at("means").get<std::vector<double>>();
        lm.sds = l.at("sds").get<std::vector<double>>();
        lm.weights = l.at("weights").get<std::vector<double>>();
        lm.intercept = l.at("intercept").get<double>();
        lm.iterations = l.at("iterations").get<int>();
        lm.converged = l.at("converged").get<bool>();
        if (lm.weights.size() != m.columns.size() || lm.means.size() != m.columns.size() ||
            lm.sds.size() != m.columns.size())
          throw Error(ErrorCode::schema, "model: coefficient count mismatch");
        m.model = std::move(lm);
        break;
      }
      case ClassifierKind::rpart: m.model = detail::tree_from_json(j.at("tree")); break;
      case ClassifierKind::randomforest: {
        const auto& fj = j.at("forest");
        ForestModel f;
        f.mtry = fj.at("mtry").get<int>();
        f.seed = fj.at("seed").get<std::uint64_t>();
        f.bootstrap = fj.at("bootstrap").get<bool>();
        f.tree_seeds = fj.at("tree_seeds").get<std::vector<std::uint64_t>>();
        for (const auto& t : fj.at("trees")) f.trees.push_back(detail::tree_from_json(t));
        if (f.trees.empty()) throw Error(ErrorCode::schema, "model: forest without trees");
        m.model = std::move(f);
        break;
      }
    }
    // Node feature indices must address a column.
    auto check_tree = [&](const TreeModel& t) {
      for (const auto& n : t.nodes)
        if (n.feature >= static_cast<int>(m.columns.size()))
          throw Error(ErrorCode::schema, "model: tree feature index out of range");
    };
    if (auto* t = std::get_if<TreeModel>(&m.model)) check_tree(*t);
    if (auto* f = std::get_if<ForestModel>(&m.model))
      for (const auto& t : f->trees) check_tree(t);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::schema, std::string("model: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Introspection.

// Standardized coefficients sorted by decreasing magnitude.
inline std::vector<std::pair<std::string, double>> ranked_coefficients(const LogitModel& m,
                                                                       const std::vector<std::string>& columns) {
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t i = 0; i < m.weights.size(); ++i) out.emplace_back(columns[i], m.weights[i]);
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return std::abs(a.second) > std::abs(b.second); });
  return out;
}

// One line per node, indented by depth: split rule, share of volunteers and
// share of all training samples reaching the node.
inline std::string format_tree(const TreeModel& t, const std::vector<std::string>& columns) {
  std::ostringstream out;
  const double total = static_cast<double>(t.nodes.front().n);
  struct Item {
    int node;
    int depth;
    std::string rule;
  };
  std::vector<Item> stack{{0, 0, "root"}};
  while (!stack.empty()) {
    const Item it = stack.back();
    stack.pop_back();
    const auto& nd = t.nodes[static_cast<std::size_t>(it.node)];
    const double volunteer = nd.n > 0 ? static_cast<double>(nd.n - nd.n_hired) / static_cast<double>(nd.n) : 0;
    out << std::string(static_cast<std::size_t>(2 * it.depth), ' ') << it.rule
        << "  volunteer=" << text::format_fixed(volunteer, 2)
        << "  n=" << text::format_fixed(100.0 * static_cast<double>(nd.n) / total, 0) << "%"
        << (nd.is_leaf() ? (nd.p_hired() >= 0.5 ? "  -> hired" : "  -> volunteer") : "") << '\n';
    if (nd.is_leaf()) continue;
    const std::string name = columns.at(static_cast<std::size_t>(nd.feature));
    const std::string thr = text::format_fixed(nd.threshold, 4);
    stack.push_back({nd.right, it.depth + 1, name + " >= " + thr});
    stack.push_back({nd.left, it.depth + 1, name + " < " + thr});
  }
  return out.str();
}

inline std::string introspect(const TrainedModel& m) {
  std::ostringstream out;
  out << "model: " << to_string(m.kind) << " (" << m.level << " level, " << m.columns.size() << " columns)\n";
  if (const auto* l = std::get_if<LogitModel>(&m.model)) {
    out << "intercept " << text::format_fixed(l->intercept, 4) << "\n";
    out << "standardized coefficients by magnitude:\n";
    for (const auto& [name, w] : ranked_coefficients(*l, m.columns))
      out << "  " << std::left << std::setw(20) << name << text::format_fixed(w, 4) << '\n';
    if (!l->converged) out << "warning: optimizer stopped at the iteration limit\n";
  } else if (const auto* t = std::get_if<TreeModel>(&m.model)) {
    out << format_tree(*t, m.columns);
  } else if (const auto* f = std::get_if<ForestModel>(&m.model)) {
    const auto imp = feature_importance(*f, m.columns.size());
    std::vector<std::size_t> order(imp.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return imp[a] > imp[b]; });
    out << f->trees.size() << " trees, mtry " << f->mtry << "\nmean decrease in Gini:\n";
    for (auto i : order)
      out << "  " << std::left << std::setw(20) << m.columns[i] << text::format_fixed(imp[i], 4) << '\n';
  }
  return out.str();
}

}  // namespace paydev::ml
