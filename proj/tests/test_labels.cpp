#include <sstream>

#include <gtest/gtest.h>

#include "paydev/labels.hpp"
#include "support.hpp"

using namespace paydev;

namespace {

LabelSet labels_from(const std::string& csv) {
  std::stringstream in(csv);
  return load_labels(in);
}

// `n` daily commits at noon UTC starting 2016-01-01.
Developer developer(const std::string& id, int n) {
  Developer d;
  d.identity.id = id;
  d.identity.emails = {id};
  const std::int64_t start = days_from_civil(2016, 1, 1) * 86400 + 12 * 3600;
  for (int i = 0; i < n; ++i)
    d.commits.push_back(test::commit(static_cast<std::uint64_t>(i + 1), "n", id, start + i * 86400LL));
  return d;
}

const std::string kHeader = "identity,status,hired_from,hired_to\n";

}  // namespace

TEST(LoadLabels, OpenEndedPeriod) {
  const auto set = labels_from(kHeader + "a@x.com,hired,2015-01-01,\n");
  const auto& e = set.entries.at("a@x.com");
  EXPECT_EQ(e.status, Status::hired);
  ASSERT_EQ(e.periods.size(), 1u);
  EXPECT_EQ(e.periods[0].from, (CivilDate{2015, 1, 1}));
  EXPECT_FALSE(e.periods[0].to);
}

TEST(LoadLabels, EmptyFileIsEmptySet) {
  EXPECT_TRUE(labels_from("").entries.empty());
  EXPECT_TRUE(labels_from(kHeader).entries.empty());
}

TEST(LoadLabels, Errors) {
  EXPECT_THROW(labels_from(kHeader + "a,hired,2015-01-01,2015-12-31\na,hired,2015-06-01,\n"), Error);
  EXPECT_THROW(labels_from(kHeader + "a,contractor,,\n"), Error);
  EXPECT_THROW(labels_from(kHeader + "a,hired,2015-13-01,\n"), Error);
  EXPECT_THROW(labels_from(kHeader + "a,hired,2015-05-01,2015-04-01\n"), Error);
  EXPECT_THROW(labels_from(kHeader + "a,hired,,\na,volunteer,,\n"), Error);
  EXPECT_THROW(labels_from("who,status,from,to\n"), Error);
  EXPECT_NO_THROW(labels_from(kHeader + "a,hired,2015-01-01,2015-03-31\na,hired,2015-04-01,\n"));
}

TEST(StudyFilter, StrictlyMoreThanThreshold) {
  const std::vector<Developer> devs{developer("a", 100), developer("b", 101), developer("c", 2)};
  const auto kept = study_filter(devs, 100);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].id(), "b");
  EXPECT_EQ(study_filter(devs, 1).size(), 3u);
  EXPECT_THROW(study_filter(devs, 0), Error);
}

TEST(StudyFilter, MonotoneInThreshold) {
  std::vector<Developer> devs;
  for (int i = 1; i <= 30; ++i) devs.push_back(developer("d" + std::to_string(i), i));
  for (int k = 2; k <= 31; ++k) {
    const auto hi = study_filter(devs, k), lo = study_filter(devs, k - 1);
    EXPECT_LE(hi.size(), lo.size());
    for (const auto& d : hi)
      EXPECT_TRUE(std::any_of(lo.begin(), lo.end(), [&](const Developer& e) { return e.id() == d.id(); }));
  }
}

TEST(ResolveMixed, MajorityWithHiredTiebreak) {
  const auto d = developer("a", 10);  // 2016-01-01 .. 2016-01-10
  // 8 of 10 commits hired.
  EXPECT_EQ(resolve_mixed(d, labels_from(kHeader + "a,hired,2016-01-03,\n")), Status::hired);
  // None hired.
  EXPECT_EQ(resolve_mixed(d, labels_from(kHeader + "a,hired,2017-01-01,\n")), Status::volunteer);
  // Exactly half.
  EXPECT_EQ(resolve_mixed(d, labels_from(kHeader + "a,hired,2016-01-01,2016-01-05\n")), Status::hired);
  // 4 of 10.
  EXPECT_EQ(resolve_mixed(d, labels_from(kHeader + "a,hired,,2016-01-04\n")), Status::volunteer);
  // Direct status, no periods.
  EXPECT_EQ(resolve_mixed(d, labels_from(kHeader + "a,volunteer,,\n")), Status::volunteer);
  EXPECT_FALSE(resolve_mixed(d, labels_from(kHeader + "b,hired,,\n")));
}

TEST(ResolveMixed, AgreesWithCommitMajority) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = developer("a", 1 + static_cast<int>(rng.below(60)));
    const int from = 1 + static_cast<int>(rng.below(28)), to = from + static_cast<int>(rng.below(40));
    const auto set = labels_from(kHeader + "a,hired,2016-01-" + (from < 10 ? "0" : "") + std::to_string(from) + "," +
                                 format_iso_date(civil_from_days(days_from_civil(2016, 1, 1) + to - 1)) + "\n");
    const auto per_commit = commit_labels(d, set);
    const auto hired = std::count(per_commit.begin(), per_commit.end(), Status::hired);
    EXPECT_EQ(resolve_mixed(d, set) == Status::hired, 2 * hired >= static_cast<long>(per_commit.size()));
  }
}

TEST(CommitLabels, PeriodsAndDirectStatus) {
  const auto d = developer("a", 4);
  const auto mixed = commit_labels(d, labels_from(kHeader + "a,hired,2016-01-03,\n"));
  EXPECT_EQ(mixed, (std::vector<Status>{Status::volunteer, Status::volunteer, Status::hired, Status::hired}));
  EXPECT_EQ(commit_labels(d, labels_from(kHeader + "a,hired,,\n")), std::vector<Status>(4, Status::hired));
  EXPECT_THROW(commit_labels(d, labels_from(kHeader + "b,hired,,\n")), Error);
}

TEST(CommitLabels, LocalDateDecidesThePeriod) {
  Developer d;
  d.identity.id = "a";
  // 2016-01-01T23:30Z at +01:00 is already 2016-01-02 locally.
  d.commits = {test::commit(1, "n", "a", days_from_civil(2016, 1, 1) * 86400 + 23 * 3600 + 1800, 60)};
  EXPECT_EQ(commit_labels(d, labels_from(kHeader + "a,hired,2016-01-02,\n"))[0], Status::hired);
}

TEST(AttachLabels, CountsSumToFilteredSet) {
  std::vector<Developer> devs{developer("a", 3), developer("b", 3), developer("c", 3), developer("d", 3)};
  devs[3].identity.id = "zzz";  // found through its alias email "d"
  const auto set = labels_from(kHeader + "a,hired,,\nb,volunteer,,\nd,hired,,\n");
  const auto r = attach_labels(devs, set);
  EXPECT_EQ(r.report.hired, 2u);
  EXPECT_EQ(r.report.volunteer, 1u);
  EXPECT_EQ(r.report.unlabeled, 1u);
  EXPECT_EQ(r.report.hired + r.report.volunteer + r.report.unlabeled, devs.size());
  EXPECT_EQ(r.developers.size(), r.status.size());
}
