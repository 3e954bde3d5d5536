#include <gtest/gtest.h>

#include <random>

#include "alertlens/core/error.hpp"
#include "alertlens/core/hash.hpp"
#include "alertlens/core/json_io.hpp"
#include "alertlens/core/resource.hpp"
#include "fixtures.hpp"

namespace alertlens {
namespace {

using testing::make_alert;
using testing::make_event;

TEST(Time, FormatsAndParsesIsoTimestamps) {
  const Timestamp t = parse_timestamp("2021-03-15T08:30:00Z");
  EXPECT_EQ(t, 1615797000);
  EXPECT_EQ(format_timestamp(t), "2021-03-15T08:30:00Z");
  EXPECT_EQ(parse_timestamp("2021-03-15"), day_start(make_day(2021, 3, 15)));
  EXPECT_EQ(parse_timestamp("2021-03-15T08:30"), t);
  EXPECT_EQ(parse_timestamp("2021-03-15T08:30:00+00:00"), t);
  EXPECT_EQ(parse_timestamp("1615797000"), t);
  EXPECT_THROW(parse_timestamp("15/03/2021"), Error);
}

TEST(Time, IsoWeeksStartOnMonday) {
  const DayIndex monday = make_day(2021, 3, 15);
  EXPECT_EQ(weekday_of(monday), 0);
  EXPECT_EQ(weekday_of(make_day(2021, 3, 21)), 6);
  for (int k = 0; k < 7; ++k) EXPECT_EQ(iso_week_start(monday + k), monday);
  EXPECT_EQ(iso_week_start(monday + 7), monday + 7);
}

TEST(Time, HourAndDayOfNegativeTimes) {
  EXPECT_EQ(day_of(-1), -1);
  EXPECT_EQ(hour_of(-1), 23);
  EXPECT_EQ(hour_of(day_start(100) + 3600 * 14 + 59), 14);
}

TEST(Resource, ClassifiesKinds) {
  const auto f = parse_resource("C:\\Users\\bob\\Documents\\Board Review Q1.pptx");
  EXPECT_EQ(f.kind, ResourceKind::kFilepath);
  EXPECT_EQ(f.filename_segment, "board review q1.pptx");

  const auto u = parse_resource("USBSTOR\\Disk&Ven_X\\{AAAAAAAA-bbbb-cccc-dddd-eeeeeeeeeeee}");
  EXPECT_EQ(u.kind, ResourceKind::kUsbDescriptor);
  ASSERT_EQ(u.guids.size(), 1u);
  EXPECT_EQ(u.guids[0], "aaaaaaaa-bbbb-cccc-dddd-eeeeeeeeeeee");

  EXPECT_EQ(parse_resource("printer-7").kind, ResourceKind::kOther);
  EXPECT_EQ(parse_resource("report.docx").kind, ResourceKind::kFilepath);
  EXPECT_EQ(parse_resource("C:/folder/").kind, ResourceKind::kOther);
  EXPECT_THROW(parse_resource(""), Error);
}

TEST(Resource, GuidEmbeddedInLongerHexIsIgnored) {
  const auto r = parse_resource("0aaaaaaaa-bbbb-cccc-dddd-eeeeeeeeeeee");
  EXPECT_TRUE(r.guids.empty());
}

TEST(Resource, PermissiveMatching) {
  const auto a = parse_resource("C:/Windows/System32/wscript.exe");
  const auto b = parse_resource("C:\\Users\\x\\Temp\\WScript.exe");
  EXPECT_FALSE(resources_match(a, b, false));
  EXPECT_TRUE(resources_match(a, b, true));
  EXPECT_TRUE(resources_match(a, a, false));

  const auto d1 = parse_resource("USB\\{11111111-2222-3333-4444-555555555555}\\{aaaaaaaa-bbbb-cccc-dddd-eeeeeeeeeeee}");
  const auto d2 = parse_resource("USB\\{aaaaaaaa-bbbb-cccc-dddd-eeeeeeeeeeee}");
  const auto d3 = parse_resource("USB\\{99999999-2222-3333-4444-555555555555}");
  EXPECT_TRUE(resources_match(d1, d2, true));
  EXPECT_FALSE(resources_match(d1, d3, true));
  EXPECT_FALSE(resources_match(d1, d2, false));
}

// Property: permissive matching is symmetric and implied by exact matching.
TEST(Resource, MatchingIsSymmetricProperty) {
  const std::vector<std::string> pool{"C:/a/x.txt", "D:\\b\\X.TXT", "x.txt", "C:/a/y.txt", "printer",
                                      "USB\\{11111111-2222-3333-4444-555555555555}",
                                      "USB2\\{11111111-2222-3333-4444-555555555555}\\{aaaaaaaa-bbbb-cccc-dddd-eeeeeeeeeeee}"};
  for (const auto& x : pool) {
    for (const auto& y : pool) {
      const auto a = parse_resource(x), b = parse_resource(y);
      EXPECT_EQ(resources_match(a, b, true), resources_match(b, a, true)) << x << " vs " << y;
      if (resources_match(a, b, false)) EXPECT_TRUE(resources_match(a, b, true));
    }
  }
}

TEST(Model, ValidateAlertAcceptsWellFormed) {
  EXPECT_TRUE(validate_alert(make_alert("a", 100, "bob")).empty());
}

TEST(Model, ValidateAlertRejectsMixedUsersAndOverCap) {
  Alert a = make_alert("a", 100, "bob");
  a.events.push_back(make_event("e2", "alice", 101));
  EXPECT_FALSE(validate_alert(a).empty());

  Alert big = make_alert("b", 100, "bob");
  for (int i = 1; i <= 100; ++i) big.events.push_back(make_event("e" + std::to_string(i), "bob", 100 + i));
  const auto problems = validate_alert(big);
  ASSERT_EQ(problems.size(), 1u);
  EXPECT_NE(problems[0].find("exceeds"), std::string::npos);

  Alert empty = make_alert("c", 100, "bob");
  empty.events.clear();
  EXPECT_FALSE(validate_alert(empty).empty());
}

TEST(Model, NormalizeMergesRangesAndDedupesUsers) {
  ExclusionSet s;
  s.excluded_ranges = {{50, 60}, {10, 20}, {15, 30}, {30, 40}};
  s.excluded_users = {"b", "a", "b"};
  const auto n = normalize(s);
  ASSERT_EQ(n.excluded_ranges.size(), 2u);
  EXPECT_EQ(n.excluded_ranges[0], (TimeRange{10, 40}));
  EXPECT_EQ(n.excluded_ranges[1], (TimeRange{50, 60}));
  EXPECT_EQ(n.excluded_users, (std::vector<std::string>{"a", "b"}));
  ExclusionSet bad;
  bad.excluded_ranges = {{5, 5}};
  EXPECT_THROW(normalize(bad), Error);
}

// Property: is_excluded on a normalized set agrees with a direct scan of the
// raw clauses.
TEST(Model, ExclusionAgreesWithDirectScanProperty) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<Timestamp> t(0, 1000);
  for (int round = 0; round < 50; ++round) {
    ExclusionSet raw;
    for (int k = 0; k < 4; ++k) {
      const Timestamp a = t(rng), b = a + 1 + t(rng) % 100;
      raw.excluded_ranges.push_back({a, b});
    }
    raw.excluded_users = {"u" + std::to_string(round % 3)};
    const auto n = normalize(raw);
    for (int probe = 0; probe < 200; ++probe) {
      const Timestamp at = t(rng);
      const std::string user = "u" + std::to_string(probe % 4);
      bool expect = user == raw.excluded_users[0];
      for (const auto& r : raw.excluded_ranges) expect = expect || (at >= r.start && at < r.end);
      EXPECT_EQ(is_excluded(n, user, at), expect);
    }
  }
}

TEST(Model, FingerprintDependsOnContentOnly) {
  ExclusionSet a, b;
  a.excluded_users = {"x", "y"};
  b.excluded_users = {"y", "x"};
  EXPECT_EQ(fingerprint(normalize(a)), fingerprint(normalize(b)));
  b.excluded_users.push_back("z");
  EXPECT_NE(fingerprint(normalize(a)), fingerprint(normalize(b)));
}

TEST(Model, AlertConstants) {
  std::vector<Alert> alerts{make_alert("a", 1, "bob", "P1", 1, "C:/x.txt"), make_alert("b", 2, "bob", "P2", 1, "C:/x.txt")};
  const auto c = alert_constants(alerts);
  EXPECT_EQ(c.at(ConstantAttribute::kUser), "bob");
  EXPECT_EQ(c.at(ConstantAttribute::kResource), "C:/x.txt");
  EXPECT_FALSE(c.at(ConstantAttribute::kPolicyId).has_value());
  EXPECT_THROW(alert_constants(std::vector<Alert>{}), Error);
}

TEST(Json, AlertRoundTrip) {
  Alert a = make_alert("a1", parse_timestamp("2021-03-15T08:30:00Z"), "bob", "P9", 4, "C:/dir/f.txt");
  a.events.push_back(make_event("e2", "bob", a.alert_time + 10, "C:/dir/g.txt"));
  std::ostringstream out;
  write_alert_line(out, a);
  const Alert back = parse_alert_line(out.str());
  EXPECT_EQ(back, a);
  EXPECT_NE(out.str().find("2021-03-15T08:30:00Z"), std::string::npos);
}

TEST(Json, MalformedLinesRaiseParseErrors) {
  try {
    parse_alert_line("{not json");
    FAIL() << "expected a parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
}

TEST(Json, ExclusionConfigRoundTrip) {
  const auto s = parse_exclusions(
      R"({"excluded_ranges":[{"start":"2021-01-01","end":"2021-01-08"}],"excluded_users":["svc"]})");
  ASSERT_EQ(s.excluded_ranges.size(), 1u);
  EXPECT_EQ(s.excluded_ranges[0].start, parse_timestamp("2021-01-01"));
  EXPECT_EQ(parse_exclusions(Json(s).dump()), s);
}

TEST(Hash, FnvKnownVectors) {
  // Published FNV-1a 64-bit test vectors.
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(to_hex(0xabcULL), "0000000000000abc");
}

}  // namespace
}  // namespace alertlens
