#include <gtest/gtest.h>

#include "support.hpp"

using paydev::test::CliResult;
using paydev::test::run_cli;
using paydev::test::slurp;
using paydev::test::TempDir;

namespace {

// Small, fast corpus shared by the pipeline tests.
struct Corpus {
  TempDir dir;
  std::string commits, labels;

  Corpus() {
    commits = dir.file("commits.jsonl");
    labels = dir.file("labels.csv");
    const auto r = run_cli("synth --seed 3 --set synth_profile=separable synth_developers=40 --labels-out '" + labels +
                               "' --out '" + commits + "'",
                           dir);
    EXPECT_EQ(r.rc, 0) << r.err;
  }

  std::string q(const std::string& name) const { return "'" + dir.file(name) + "'"; }
};

const std::string kFast = " --set folds=3 repeats=2 forest_trees=20";

}  // namespace

TEST(Cli, UsageErrors) {
  TempDir dir;
  EXPECT_EQ(run_cli("", dir).rc, 1);
  EXPECT_EQ(run_cli("frobnicate", dir).rc, 1);
  EXPECT_EQ(run_cli("evaluate --commits x.jsonl", dir).rc, 1);  // --labels missing
  EXPECT_EQ(run_cli("synth", dir).rc, 1);                       // --labels-out missing
  EXPECT_EQ(run_cli("ingest", dir).rc, 1);
  EXPECT_EQ(run_cli("--help", dir).rc, 0);
}

TEST(Cli, IngestHelpShowsExportCommand) {
  TempDir dir;
  const auto r = run_cli("ingest --help", dir);
  EXPECT_EQ(r.rc, 0);
  EXPECT_NE(r.out.find("git log --all --no-merges"), std::string::npos) << r.out;
}

TEST(Cli, MissingFileIsIoError) {
  TempDir dir;
  const auto r = run_cli("features --commits '" + dir.file("absent.jsonl") + "'", dir);
  EXPECT_EQ(r.rc, 2);
  EXPECT_NE(r.err.find("absent.jsonl"), std::string::npos);
}

TEST(Cli, UnknownConfigKeyIsSchemaError) {
  TempDir dir;
  const std::string conf = dir.write("exp.conf", "folds = 5\nflavour = mint\n");
  const auto r = run_cli("features --config '" + conf + "' --commits x", dir);
  EXPECT_EQ(r.rc, 3);
  EXPECT_NE(r.err.find("flavour"), std::string::npos);
}

TEST(Cli, IngestIdentitiesFeaturesPipeline) {
  TempDir dir;
  const std::string log = std::string("\x1e") + std::string(40, 'a') + "\x1f" + "Ann\x1f" + "ann@x.org\x1f" +
                          "1483351200\x1f" + "2017-01-02 11:00:00 +0100\x1f" + "Bug 123 - fix\n\x1d\n" +
                          "3\t1\tsrc/a.cpp\n-\t-\timg.png\n";
  const std::string input = dir.write("export.log", log);
  const auto ingest = run_cli("ingest --input '" + input + "' --out '" + dir.file("c.jsonl") + "'", dir);
  ASSERT_EQ(ingest.rc, 0) << ingest.err;
  const std::string canon = slurp(dir.file("c.jsonl"));
  EXPECT_NE(canon.find("\"lines_added\":3"), std::string::npos) << canon;

  const auto ids = run_cli("identities --commits '" + dir.file("c.jsonl") + "'", dir);
  ASSERT_EQ(ids.rc, 0) << ids.err;
  EXPECT_NE(ids.out.find("ann@x.org"), std::string::npos);

  const auto feats = run_cli("features --set min_commits=1 --commits '" + dir.file("c.jsonl") + "'", dir);
  ASSERT_EQ(feats.rc, 0) << feats.err;
  EXPECT_EQ(feats.out.rfind("identity,period", 0), 0u);
  EXPECT_EQ(std::count(feats.out.begin(), feats.out.end(), '\n'), 1);  // one commit is not more than one

  const auto bad = run_cli("ingest --input '" + dir.write("bad.log", "\x1enot a record") + "'", dir);
  EXPECT_EQ(bad.rc, 3);
}

TEST(Cli, EvaluateJsonIsByteIdentical) {
  Corpus c;
  const std::string args = "evaluate --format json --commits '" + c.commits + "' --labels '" + c.labels + "'" + kFast;
  const auto a = run_cli(args + " --out " + c.q("a.json"), c.dir);
  const auto b = run_cli(args + " --out " + c.q("b.json") + " --set forest_threads=4", c.dir);
  ASSERT_EQ(a.rc, 0) << a.err;
  ASSERT_EQ(b.rc, 0) << b.err;
  const std::string ja = slurp(c.dir.file("a.json")), jb = slurp(c.dir.file("b.json"));
  EXPECT_FALSE(ja.empty());
  EXPECT_EQ(ja, jb);
  EXPECT_NE(ja.find("\"randomforest\""), std::string::npos);
  EXPECT_NE(ja.find("\"95%officehours\""), std::string::npos);

  const auto table = run_cli("evaluate --commits '" + c.commits + "' --labels '" + c.labels + "'" + kFast, c.dir);
  ASSERT_EQ(table.rc, 0);
  EXPECT_NE(table.out.find("allhired"), std::string::npos);
}

TEST(Cli, TrainPredictAndColumnMismatch) {
  Corpus c;
  const auto feats16 = run_cli("features --commits '" + c.commits + "' --out " + c.q("f16.csv"), c.dir);
  const auto feats12 =
      run_cli("features --set feature_mode=no_volume --commits '" + c.commits + "' --out " + c.q("f12.csv"), c.dir);
  ASSERT_EQ(feats16.rc, 0) << feats16.err;
  ASSERT_EQ(feats12.rc, 0) << feats12.err;

  const auto train = run_cli("train --classifier rpart --features " + c.q("f16.csv") + " --labels '" + c.labels +
                                 "' --out " + c.q("m.model"),
                             c.dir);
  ASSERT_EQ(train.rc, 0) << train.err;
  EXPECT_NE(train.err.find("root"), std::string::npos);

  const auto ok = run_cli("predict --features " + c.q("f16.csv") + " --model " + c.q("m.model"), c.dir);
  ASSERT_EQ(ok.rc, 0) << ok.err;
  EXPECT_EQ(ok.out.rfind("identity,probability,class\n", 0), 0u);
  EXPECT_EQ(std::count(ok.out.begin(), ok.out.end(), '\n'), 41);

  const auto mismatch = run_cli("predict --features " + c.q("f12.csv") + " --model " + c.q("m.model"), c.dir);
  EXPECT_EQ(mismatch.rc, 4);
  EXPECT_NE(mismatch.err.find("commits"), std::string::npos) << mismatch.err;

  EXPECT_EQ(run_cli("train --features " + c.q("f16.csv") + " --labels '" + c.labels + "'", c.dir).rc, 1);
}

TEST(Cli, CommitLevelModelAndExperiment) {
  Corpus c;
  const auto train = run_cli("train --level commit --classifier logit --commits '" + c.commits + "' --labels '" +
                                 c.labels + "' --out " + c.q("cm.model"),
                             c.dir);
  ASSERT_EQ(train.rc, 0) << train.err;
  const auto pred = run_cli("predict --commits '" + c.commits + "' --model " + c.q("cm.model"), c.dir);
  ASSERT_EQ(pred.rc, 0) << pred.err;
  EXPECT_EQ(pred.out.rfind("sha,probability,class\n", 0), 0u);

  const auto exp = run_cli("commits --format json --set forest_trees=20 --commits '" + c.commits + "' --labels '" +
                               c.labels + "'",
                           c.dir);
  ASSERT_EQ(exp.rc, 0) << exp.err;
  EXPECT_NE(exp.out.find("\"least_active\""), std::string::npos);
  EXPECT_NE(exp.out.find("\"allpaid\""), std::string::npos);
}

TEST(Cli, LabelProblemsMapToExitCodes) {
  Corpus c;
  const std::string hired_only = c.dir.write("hired.csv", [&] {
    std::string s = slurp(c.labels), out;
    std::size_t pos = 0;
    while (pos < s.size()) {
      auto end = s.find('\n', pos);
      std::string line = s.substr(pos, end - pos);
      pos = end == std::string::npos ? s.size() : end + 1;
      if (line.find(",volunteer,") == std::string::npos) out += line + "\n";
    }
    return out;
  }());
  const auto single = run_cli("evaluate --commits '" + c.commits + "' --labels '" + hired_only + "'" + kFast, c.dir);
  EXPECT_EQ(single.rc, 5) << single.err;
  const auto folds = run_cli("evaluate --commits '" + c.commits + "' --labels '" + c.labels +
                                 "' --set folds=25 repeats=1 forest_trees=5",
                             c.dir);
  EXPECT_EQ(folds.rc, 6) << folds.err;
}
