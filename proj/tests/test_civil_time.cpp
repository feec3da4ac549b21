#include <chrono>

#include <gtest/gtest.h>

#include "paydev/civil_time.hpp"
#include "paydev/rng.hpp"

using namespace paydev;
namespace chr = std::chrono;

namespace {

// Calendar oracle built on <chrono> only.
struct Expected {
  int year, month, day, hour, minute, weekday_iso, iso_year, iso_week;
};

Expected chrono_oracle(std::int64_t ts, int offset_minutes) {
  const chr::sys_seconds t{chr::seconds{ts + static_cast<std::int64_t>(offset_minutes) * 60}};
  const chr::sys_days day = chr::floor<chr::days>(t);
  const chr::year_month_day ymd{day};
  const chr::hh_mm_ss hms{t - day};
  const chr::weekday wd{day};
  const chr::sys_days thursday = day - chr::days{wd.iso_encoding() - 1} + chr::days{3};
  const chr::year iso_year = chr::year_month_day{thursday}.year();
  const chr::sys_days jan1 = chr::sys_days{iso_year / chr::January / 1};
  return {static_cast<int>(ymd.year()),
          static_cast<int>(static_cast<unsigned>(ymd.month())),
          static_cast<int>(static_cast<unsigned>(ymd.day())),
          static_cast<int>(hms.hours().count()),
          static_cast<int>(hms.minutes().count()),
          static_cast<int>(wd.iso_encoding()),
          static_cast<int>(iso_year),
          static_cast<int>((thursday - jan1).count() / 7 + 1)};
}

void expect_matches(std::int64_t ts, int off) {
  const LocalTime lt = to_local(ts, off);
  const Expected e = chrono_oracle(ts, off);
  ASSERT_EQ(lt.date.year, e.year) << ts << " " << off;
  ASSERT_EQ(lt.date.month, e.month) << ts;
  ASSERT_EQ(lt.date.day, e.day) << ts;
  ASSERT_EQ(lt.hour, e.hour) << ts;
  ASSERT_EQ(lt.minute, e.minute) << ts;
  ASSERT_EQ(static_cast<int>(lt.weekday) + 1, e.weekday_iso) << ts;
  ASSERT_EQ(lt.iso_week.year, e.iso_year) << ts;
  ASSERT_EQ(lt.iso_week.week, e.iso_week) << ts;
}

}  // namespace

TEST(ToLocal, OffsetShiftsIntoPreviousDay) {
  const LocalTime lt = to_local(1483255800, 120);  // 2017-01-01T07:30Z
  EXPECT_EQ(lt.date, (CivilDate{2017, 1, 1}));
  EXPECT_EQ(lt.hour, 9);
  EXPECT_EQ(lt.minute, 30);
  EXPECT_EQ(lt.weekday, Weekday::sun);
}

TEST(ToLocal, NegativeOffsetCrossesIsoYear) {
  const LocalTime lt = to_local(1483315200, -60);  // 2017-01-02T00:00Z
  EXPECT_EQ(lt.date, (CivilDate{2017, 1, 1}));
  EXPECT_EQ(lt.hour, 23);
  EXPECT_EQ(lt.weekday, Weekday::sun);
  EXPECT_EQ(lt.iso_week.year, 2016);
  EXPECT_EQ(lt.iso_week.week, 52);
}

TEST(ToLocal, MatchesChronoOnRandomInstants) {
  Rng rng(20240611);
  for (int i = 0; i < 10000; ++i) {
    const std::int64_t ts = rng.between(-2'208'988'800LL, 4'102'444'800LL);  // 1900..2100
    expect_matches(ts, 0);
    expect_matches(ts, static_cast<int>(rng.between(-1440, 1440)));
  }
}

TEST(ToLocal, HourEqualsShiftedUtcHour) {
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const std::int64_t ts = rng.between(0, 2'000'000'000);
    const int off = static_cast<int>(rng.between(-840, 840));
    EXPECT_EQ(to_local(ts, off).hour, to_local(ts + off * 60, 0).hour);
  }
}

TEST(ToLocal, IsoWeekBoundaries) {
  // 2020 has 53 ISO weeks; 2021-01-03 (Sun) still belongs to 2020-W53.
  EXPECT_EQ(iso_week_from_days(days_from_civil(2021, 1, 3)), (IsoWeek{2020, 53}));
  EXPECT_EQ(iso_week_from_days(days_from_civil(2021, 1, 4)), (IsoWeek{2021, 1}));
  EXPECT_EQ(iso_week_from_days(days_from_civil(2008, 12, 29)), (IsoWeek{2009, 1}));
}

TEST(CivilDate, RoundTripsThroughDayCount) {
  for (std::int64_t z = -800000; z <= 800000; z += 97) {
    EXPECT_EQ(days_from_civil(civil_from_days(z)), z);
  }
}

TEST(CivilDate, ParsesStrictIsoDates) {
  EXPECT_EQ(parse_iso_date("2016-02-29"), (CivilDate{2016, 2, 29}));
  EXPECT_FALSE(parse_iso_date("2015-02-29"));
  EXPECT_FALSE(parse_iso_date("2015-2-01"));
  EXPECT_FALSE(parse_iso_date("2015-13-01"));
  EXPECT_FALSE(parse_iso_date(""));
  EXPECT_EQ(format_iso_date({2017, 1, 8}), "2017-01-08");
}
