#pragma once

// Command implementations behind the `paydev` tool. Each command validates
// all inputs before writing anything, writes files atomically, and echoes the
// configuration it ran with to the diagnostic stream.

#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "paydev/config.hpp"
#include "paydev/error.hpp"
#include "paydev/eval/baselines.hpp"
#include "paydev/eval/cross_validate.hpp"
#include "paydev/eval/folds.hpp"
#include "paydev/eval/per_commit.hpp"
#include "paydev/eval/report.hpp"
#include "paydev/eval/synth.hpp"
#include "paydev/features.hpp"
#include "paydev/identity.hpp"
#include "paydev/ingest.hpp"
#include "paydev/io.hpp"
#include "paydev/labels.hpp"
#include "paydev/linkage.hpp"
#include "paydev/ml/dataset.hpp"
#include "paydev/ml/model.hpp"

namespace paydev::app {

enum class Format { json, table };

inline Format parse_format(std::string_view s) {
  if (s == "json") return Format::json;
  if (s == "table") return Format::table;
  throw Error(ErrorCode::usage, "unknown format '" + std::string(s) + "' (json, table)");
}

struct Context {
  Config config;
  std::string out;  // empty or "-" = stdout
  Format format = Format::table;
  std::ostream* stdout_stream = &std::cout;
  std::ostream* log = &std::cerr;
};

inline void emit(const Context& ctx, const std::string& path, std::string_view content) {
  if (path.empty() || path == "-") {
    ctx.stdout_stream->write(content.data(), static_cast<std::streamsize>(content.size()));
    ctx.stdout_stream->flush();
  } else {
    io::write_file_atomic(path, content);
  }
}

inline void echo_config(const Context& ctx, std::string_view command) {
  *ctx.log << "# paydev " << command << '\n' << config_echo(ctx.config);
}

// ---------------------------------------------------------------------------
// Input loading.

inline std::vector<CommitRecord> load_commits(const std::string& path) {
  if (path == "-") return read_canonical(std::cin);
  auto in = io::open_input(path);
  return read_canonical(in);
}

// Developers from a canonical file and an identity map; without a map the
// identities are merged on the fly.
inline std::vector<Developer> load_developers(const std::string& commits_path,
                                              const std::optional<std::string>& identities_path) {
  const auto records = load_commits(commits_path);
  std::vector<Identity> identities;
  if (identities_path) {
    auto in = io::open_input(*identities_path);
    identities = read_identity_map(in);
  } else {
    identities = merge_identities(records, {}).identities;
  }
  return group_commits(identities, records);
}

inline LabelSet load_label_file(const std::string& path) {
  auto in = io::open_input(path);
  return load_labels(in, path);
}

// Keep `want` columns of `m` in that order; missing columns are an error.
inline FeatureMatrix select_columns(const FeatureMatrix& m, const std::vector<std::string>& want) {
  FeatureMatrix out;
  out.row_ids = m.row_ids;
  out.columns = want;
  out.values = ml::align_columns(want, m.columns, m.values);
  return out;
}

// Labeled study population: developers with more than min_commits commits
// that carry a label.
struct StudySet {
  LabeledDevelopers labeled;
  std::size_t candidates = 0;  // developers passing the commit threshold
};

inline StudySet study_population(const std::vector<Developer>& devs, const LabelSet& labels, const Config& cfg) {
  StudySet s;
  const auto kept = study_filter(devs, cfg.min_commits);
  s.candidates = kept.size();
  s.labeled = attach_labels(kept, labels);
  return s;
}

inline std::vector<int> binary_labels(const std::vector<Status>& status) {
  std::vector<int> y;
  for (auto s : status) y.push_back(s == Status::hired ? 1 : 0);
  return y;
}

// Inputs shared by evaluate / train / predict.
struct DataSource {
  std::optional<std::string> commits;
  std::optional<std::string> identities;
  std::optional<std::string> features;
};

struct LabeledData {
  ml::Dataset data;
  std::vector<Developer> developers;  // empty when read from a features CSV
  LabelReport report;
};

inline LabeledData labeled_developer_data(const DataSource& src, const LabelSet& labels, const Config& cfg) {
  LabeledData out;
  const auto columns = feature_columns(cfg.feature_mode);
  if (src.features) {
    auto in = io::open_input(*src.features);
    const FeatureMatrix m = select_columns(read_features_csv(in, *src.features), columns);
    std::vector<std::size_t> keep;
    std::vector<int> y;
    for (std::size_t r = 0; r < m.row_ids.size(); ++r) {
      Identity probe;
      probe.id = m.row_ids[r];
      const LabelEntry* e = labels.find(probe);
      if (!e) {
        ++out.report.unlabeled;
        continue;
      }
      keep.push_back(r);
      y.push_back(e->status == Status::hired ? 1 : 0);
      (e->status == Status::hired ? out.report.hired : out.report.volunteer)++;
    }
    out.data = ml::make_dataset(m, std::vector<int>(m.row_ids.size(), 0)).subset(keep);
    out.data.y = y;
    return out;
  }
  if (!src.commits) throw Error(ErrorCode::usage, "need --features or --commits");
  const auto devs = load_developers(*src.commits, src.identities);
  auto study = study_population(devs, labels, cfg);
  out.report = study.labeled.report;
  out.data = ml::make_dataset(feature_matrix(study.labeled.developers, cfg.feature_mode),
                              binary_labels(study.labeled.status));
  out.developers = std::move(study.labeled.developers);
  return out;
}

inline nlohmann::ordered_json report_json(const LabelReport& r) {
  nlohmann::ordered_json j;
  j["hired"] = r.hired;
  j["volunteer"] = r.volunteer;
  j["unlabeled"] = r.unlabeled;
  return j;
}

// ---------------------------------------------------------------------------
// ingest

struct IngestOptions {
  std::optional<std::string> input;  // git-log export; "-" = stdin
  std::optional<std::string> repo;   // run the export in this repository
  std::optional<std::string> products;
};

inline std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

inline std::string run_git_export(const std::string& repo) {
  const std::string cmd = "git -C " + shell_quote(repo) + std::string(kGitExportCommand).substr(3);
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  if (!pipe) throw Error(ErrorCode::io, "cannot run git");
  std::string data;
  char buf[65536];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe.get())) > 0) data.append(buf, n);
  const int status = pclose(pipe.release());
  if (status != 0) throw Error(ErrorCode::io, "git log failed in " + repo);
  return data;
}

inline int cmd_ingest(const Context& ctx, const IngestOptions& opt) {
  echo_config(ctx, "ingest");
  if (opt.input.has_value() == opt.repo.has_value()) throw Error(ErrorCode::usage, "give exactly one of --input or --repo");
  std::vector<CommitRecord> records;
  if (opt.repo) {
    records = parse_git_log(run_git_export(*opt.repo));
  } else if (*opt.input == "-") {
    records = parse_git_log(std::cin);
  } else {
    records = parse_git_log(io::read_file(*opt.input));
  }
  *ctx.log << "commits: " << records.size() << '\n';
  if (opt.products) {
    auto in = io::open_input(*opt.products);
    const ProductMap map = load_product_map(in, *opt.products);
    const std::set<std::string> allowed(ctx.config.products.begin(), ctx.config.products.end());
    auto filtered = filter_by_products(records, map, allowed);
    *ctx.log << "linked: " << filtered.counts.linked << "  unmapped: " << filtered.counts.unmapped
             << "  kept: " << filtered.counts.kept << '\n';
    records = std::move(filtered.kept);
  }
  emit(ctx, ctx.out, write_canonical(records));
  return 0;
}

// ---------------------------------------------------------------------------
// identities

struct IdentitiesOptions {
  std::string commits;
  std::optional<std::string> overrides;
  std::optional<std::string> report;  // write the alias report here instead of the log
};

inline int cmd_identities(const Context& ctx, const IdentitiesOptions& opt) {
  echo_config(ctx, "identities");
  const auto records = load_commits(opt.commits);
  std::vector<OverrideRule> rules;
  if (opt.overrides) {
    auto in = io::open_input(*opt.overrides);
    rules = parse_overrides(in);
  }
  const auto merged = merge_identities(records, rules);
  for (const auto& w : merged.warnings) *ctx.log << "warning: " << w << '\n';
  const std::string table = format_identity_report(identity_report(merged.identities));
  const std::string map = write_identity_map(merged.identities);
  if (opt.report) io::write_file_atomic(*opt.report, table);
  emit(ctx, ctx.out, map);
  if (!opt.report) *ctx.log << table;
  return 0;
}

// ---------------------------------------------------------------------------
// features

struct FeaturesOptions {
  std::string commits;
  std::optional<std::string> identities;
};

inline int cmd_features(const Context& ctx, const FeaturesOptions& opt) {
  echo_config(ctx, "features");
  const auto devs = study_filter(load_developers(opt.commits, opt.identities), ctx.config.min_commits);
  *ctx.log << "developers with more than " << ctx.config.min_commits << " commits: " << devs.size() << '\n';
  emit(ctx, ctx.out, write_features_csv(feature_matrix(devs, ctx.config.feature_mode)));
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOptions {
  DataSource source;
  std::string labels;
};

inline constexpr ml::ClassifierKind kAllClassifiers[] = {ml::ClassifierKind::logit, ml::ClassifierKind::rpart,
                                                          ml::ClassifierKind::randomforest};

inline eval::EvalReport evaluate(const Config& cfg, const LabeledData& ld) {
  eval::EvalReport report;
  report.config = to_json(cfg);
  report.config["developers"] = report_json(ld.report);
  const auto pos = ld.data.positives();
  if (pos == 0 || pos == ld.data.rows())
    throw Error(ErrorCode::single_class, "labels join to a single class (" + std::to_string(pos) + " hired of " +
                                             std::to_string(ld.data.rows()) + ")");
  const auto folds = eval::stratified_kfold(ld.data.y, cfg.folds, cfg.repeats, cfg.seed);
  for (auto kind : kAllClassifiers) {
    auto cells = eval::cross_validate(ld.data, kind, cfg.classifiers, folds, cfg.seed);
    report.cells.insert(report.cells.end(), cells.begin(), cells.end());
  }
  if (!ld.developers.empty())
    for (const auto& spec : eval::standard_baselines(cfg.email_domains))
      report.cells.push_back(eval::evaluate_baseline(spec, ld.developers, ld.data.y));
  return report;
}

inline int cmd_evaluate(const Context& ctx, const EvaluateOptions& opt) {
  echo_config(ctx, "evaluate");
  const auto labels = load_label_file(opt.labels);
  const auto ld = labeled_developer_data(opt.source, labels, ctx.config);
  *ctx.log << "labeled developers: " << ld.report.hired << " hired, " << ld.report.volunteer << " volunteer ("
           << ld.report.unlabeled << " unlabeled)\n";
  if (ld.developers.empty()) *ctx.log << "note: baselines need commit histories; skipped for feature input\n";
  const auto report = evaluate(ctx.config, ld);
  emit(ctx, ctx.out,
       ctx.format == Format::json ? eval::to_json(report).dump(2) + "\n"
                                  : eval::to_table(report, "Predicting employment status (" +
                                                               std::to_string(ctx.config.repeats) + "x" +
                                                               std::to_string(ctx.config.folds) + "-fold)"));
  return 0;
}

// ---------------------------------------------------------------------------
// train

struct TrainOptions {
  DataSource source;
  std::string labels;
  ml::ClassifierKind classifier = ml::ClassifierKind::randomforest;
  std::string level = "developer";
};

inline ml::TrainedModel train_model(const Config& cfg, const TrainOptions& opt, const LabelSet& labels,
                                    std::ostream& log) {
  auto params = eval::fold_params(cfg.classifiers, cfg.seed, 0, 0);
  if (opt.level == "developer") {
    const auto ld = labeled_developer_data(opt.source, labels, cfg);
    log << "training rows: " << ld.data.rows() << '\n';
    return ml::train(opt.classifier, ld.data, params);
  }
  if (opt.level != "commit") throw Error(ErrorCode::usage, "level must be developer or commit");
  if (!opt.source.commits) throw Error(ErrorCode::usage, "commit level needs --commits");
  const auto devs = load_developers(*opt.source.commits, opt.source.identities);
  auto study = study_population(devs, labels, cfg);
  std::vector<const Developer*> ptrs;
  for (const auto& d : study.labeled.developers) ptrs.push_back(&d);
  const auto rows = eval::commit_rows(ptrs, labels);
  log << "training commits: " << rows.y.size() << '\n';
  auto model = ml::train(opt.classifier, ml::Dataset{eval::commit_columns(), rows.x, rows.y, {}}, params);
  model.level = "commit";
  return model;
}

inline int cmd_train(const Context& ctx, const TrainOptions& opt) {
  echo_config(ctx, "train");
  if (ctx.out.empty() || ctx.out == "-") throw Error(ErrorCode::usage, "train needs --out");
  const auto labels = load_label_file(opt.labels);
  const auto model = train_model(ctx.config, opt, labels, *ctx.log);
  io::write_file_atomic(ctx.out, ml::save_model(model));
  *ctx.log << ml::introspect(model);
  return 0;
}

// ---------------------------------------------------------------------------
// predict

struct PredictOptions {
  DataSource source;
  std::string model;
};

inline int cmd_predict(const Context& ctx, const PredictOptions& opt) {
  echo_config(ctx, "predict");
  auto in = io::open_input(opt.model);
  const auto model = ml::load_model(in);
  std::vector<std::string> ids;
  std::vector<std::string> columns;
  Eigen::MatrixXd x;
  std::string key = "identity";
  if (model.level == "commit") {
    if (!opt.source.commits) throw Error(ErrorCode::usage, "commit-level model needs --commits");
    const auto devs = load_developers(*opt.source.commits, opt.source.identities);
    std::vector<std::array<double, CommitFeatures::kCount>> rows;
    for (const auto& d : devs) {
      const auto feats = commit_features(d.commits, developer_features(d.commits));
      for (std::size_t i = 0; i < feats.size(); ++i) {
        rows.push_back(feats[i].values());
        ids.push_back(d.commits[i].sha);
      }
    }
    columns = eval::commit_columns();
    x.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(CommitFeatures::kCount));
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < CommitFeatures::kCount; ++c)
        x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    key = "sha";
  } else if (opt.source.features) {
    auto fin = io::open_input(*opt.source.features);
    auto m = read_features_csv(fin, *opt.source.features);
    ids = m.row_ids;
    columns = m.columns;
    x = m.values;
  } else if (opt.source.commits) {
    const auto devs = study_filter(load_developers(*opt.source.commits, opt.source.identities),
                                   ctx.config.min_commits);
    // All 16 columns; the model picks the ones it was trained on.
    auto m = feature_matrix(devs, FeatureMode::all);
    ids = m.row_ids;
    columns = m.columns;
    x = m.values;
  } else {
    throw Error(ErrorCode::usage, "need --features or --commits");
  }
  const Eigen::VectorXd p = ml::predict_proba(model, columns, x);
  std::string out = key + ",probability,class\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const double pi = p(static_cast<Eigen::Index>(i));
    out += csv::escape(ids[i]) + "," + text::format_fixed(pi, 6) + "," +
           std::string(to_string(ml::classify(pi) ? Status::hired : Status::volunteer)) + "\n";
  }
  emit(ctx, ctx.out, out);
  return 0;
}

// ---------------------------------------------------------------------------
// commits

struct CommitsOptions {
  std::string commits;
  std::optional<std::string> identities;
  std::string labels;
};

inline int cmd_commits(const Context& ctx, const CommitsOptions& opt) {
  echo_config(ctx, "commits");
  const auto labels = load_label_file(opt.labels);
  const auto devs = load_developers(opt.commits, opt.identities);
  const auto study = study_population(devs, labels, ctx.config);
  const auto& cfg = ctx.config;
  auto result = eval::per_commit_experiment(study.labeled.developers, labels,
                                            {std::begin(kAllClassifiers), std::end(kAllClassifiers)},
                                            cfg.classifiers, cfg.coverage, cfg.seed, cfg.email_domains);
  *ctx.log << "training developers: " << result.training_developers.size() << " ("
           << result.training_commits << " of " << result.total_commits << " commits)\n";
  nlohmann::ordered_json conf = to_json(cfg);
  conf["developers"] = report_json(study.labeled.report);
  conf["training_developers"] = result.training_developers;
  conf["training_commits"] = result.training_commits;
  conf["total_commits"] = result.total_commits;
  result.all.config = conf;
  result.least_active.config = conf;
  if (ctx.format == Format::json) {
    nlohmann::ordered_json j;
    j["config"] = conf;
    auto all = eval::to_json(result.all);
    auto rest = eval::to_json(result.least_active);
    all.erase("config");
    rest.erase("config");
    j["all"] = std::move(all);
    j["least_active"] = std::move(rest);
    emit(ctx, ctx.out, j.dump(2) + "\n");
  } else {
    emit(ctx, ctx.out,
         eval::to_table(result.all, "Tested on all commits") + "\n" +
             eval::to_table(result.least_active, "Tested on commits of the least active developers"));
  }
  return 0;
}

// ---------------------------------------------------------------------------
// synth

struct SynthOptions {
  std::optional<std::string> labels_out;
};

inline int cmd_synth(const Context& ctx, const SynthOptions& opt) {
  echo_config(ctx, "synth");
  if (!opt.labels_out) throw Error(ErrorCode::usage, "synth needs --labels-out");
  const auto& cfg = ctx.config;
  auto spec = eval::synth_preset(cfg.synth_profile);
  spec.developers = cfg.synth_developers;
  spec.hired_fraction = cfg.synth_hired_fraction;
  spec.min_commits = cfg.synth_min_commits;
  spec.max_commits = cfg.synth_max_commits;
  if (!cfg.email_domains.empty()) spec.company_domain = cfg.email_domains.front();
  *ctx.log << "synth_profile = " << cfg.synth_profile << "\nsynth_developers = " << spec.developers
           << "\nsynth_hired_fraction = " << spec.hired_fraction << '\n';
  const auto corpus = eval::generate_synthetic_corpus(spec, cfg.seed);
  io::write_file_atomic(*opt.labels_out, eval::labels_csv(corpus));
  emit(ctx, ctx.out, write_canonical(corpus.records));
  *ctx.log << "commits: " << corpus.records.size() << '\n';
  return 0;
}

}  // namespace paydev::app
