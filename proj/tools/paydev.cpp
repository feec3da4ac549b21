// paydev: classify contributors of a project history as paid or volunteer.

#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "paydev/app.hpp"

namespace {

using namespace paydev;

struct Common {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  std::string out;
  std::string format = "table";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "key=value configuration file");
  cmd->add_option("--seed", c.seed, "master random seed (overrides the config)");
  cmd->add_option("--set", c.overrides, "override one config key, e.g. --set folds=5")->take_all();
  cmd->add_option("--out", c.out, "output path (default: standard output)");
  cmd->add_option("--format", c.format, "report format: json or table");
}

app::Context make_context(const Common& c) {
  app::Context ctx;
  if (c.config) {
    auto in = io::open_input(*c.config);
    ctx.config = parse_config(in, *c.config);
  }
  for (const auto& kv : c.overrides) apply_override(ctx.config, kv);
  if (c.seed) ctx.config.seed = *c.seed;
  ctx.out = c.out;
  ctx.format = app::parse_format(c.format);
  return ctx;
}

void add_source(CLI::App* cmd, app::DataSource& s) {
  cmd->add_option("--commits", s.commits, "canonical commit file (JSONL)");
  cmd->add_option("--identities", s.identities, "identity map (default: merge aliases automatically)");
  cmd->add_option("--features", s.features, "features CSV instead of commits");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"paydev: tell paid from volunteer contributors using commit activity"};
  cli.require_subcommand(1);
  cli.set_help_all_flag("--help-all", "show help for every subcommand");

  Common common;

  app::IngestOptions ingest;
  auto* c_ingest = cli.add_subcommand("ingest", "parse a git-log export into the canonical commit file");
  c_ingest->footer(std::string("Export format (run inside the repository):\n  ") +
                   std::string(kGitExportCommand) + "\n");
  c_ingest->add_option("--input", ingest.input, "git-log export file, or - for standard input");
  c_ingest->add_option("--repo", ingest.repo, "run the export in this git repository");
  c_ingest->add_option("--products", ingest.products, "issue_id,product CSV; keep allowlisted products only");
  add_common(c_ingest, common);

  app::IdentitiesOptions identities;
  auto* c_ident = cli.add_subcommand("identities", "merge author aliases into developer identities");
  c_ident->add_option("--commits", identities.commits, "canonical commit file")->required();
  c_ident->add_option("--overrides", identities.overrides, "manual merge/split rules");
  c_ident->add_option("--report", identities.report, "write the alias report here");
  add_common(c_ident, common);

  app::FeaturesOptions features;
  auto* c_feat = cli.add_subcommand("features", "compute per-developer activity features");
  c_feat->add_option("--commits", features.commits, "canonical commit file")->required();
  c_feat->add_option("--identities", features.identities, "identity map");
  add_common(c_feat, common);

  app::EvaluateOptions evaluate;
  auto* c_eval = cli.add_subcommand("evaluate", "repeated cross-validation of all classifiers and baselines");
  add_source(c_eval, evaluate.source);
  c_eval->add_option("--labels", evaluate.labels, "labels CSV")->required();
  add_common(c_eval, common);

  app::TrainOptions train;
  std::string classifier = "randomforest";
  auto* c_train = cli.add_subcommand("train", "fit one classifier and save it");
  add_source(c_train, train.source);
  c_train->add_option("--labels", train.labels, "labels CSV")->required();
  c_train->add_option("--classifier", classifier, "logit, rpart or randomforest");
  c_train->add_option("--level", train.level, "developer or commit");
  add_common(c_train, common);

  app::PredictOptions predict;
  auto* c_pred = cli.add_subcommand("predict", "apply a saved model");
  add_source(c_pred, predict.source);
  c_pred->add_option("--model", predict.model, "model file")->required();
  add_common(c_pred, common);

  app::CommitsOptions commits;
  auto* c_commits = cli.add_subcommand("commits", "commit-level experiment: train on the most active developers");
  c_commits->add_option("--commits", commits.commits, "canonical commit file")->required();
  c_commits->add_option("--identities", commits.identities, "identity map");
  c_commits->add_option("--labels", commits.labels, "labels CSV")->required();
  add_common(c_commits, common);

  app::SynthOptions synth;
  auto* c_synth = cli.add_subcommand("synth", "generate a synthetic labeled commit history");
  c_synth->add_option("--labels-out", synth.labels_out, "labels CSV output path");
  add_common(c_synth, common);

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ErrorCode::usage);
  }

  try {
    const app::Context ctx = make_context(common);
    if (*c_ingest) return app::cmd_ingest(ctx, ingest);
    if (*c_ident) return app::cmd_identities(ctx, identities);
    if (*c_feat) return app::cmd_features(ctx, features);
    if (*c_eval) return app::cmd_evaluate(ctx, evaluate);
    if (*c_train) {
      train.classifier = ml::parse_classifier(classifier);
      return app::cmd_train(ctx, train);
    }
    if (*c_pred) return app::cmd_predict(ctx, predict);
    if (*c_commits) return app::cmd_commits(ctx, commits);
    if (*c_synth) return app::cmd_synth(ctx, synth);
  } catch (const Error& e) {
    std::cerr << "error[" << e.exit_code() << "]: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error[" << static_cast<int>(ErrorCode::io) << "]: " << e.what() << '\n';
    return static_cast<int>(ErrorCode::io);
  }
  return static_cast<int>(ErrorCode::usage);
}
