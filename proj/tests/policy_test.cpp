#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "alertlens/core/error.hpp"
#include "alertlens/policy/engine.hpp"
#include "fixtures.hpp"

namespace alertlens {
namespace {

using policy::detect_stream;
using policy::eval_clause;
using policy::eval_policy;
using testing::make_event;

PolicyClause clause(ClauseAttribute a, ClauseOperator o, ClauseValue v) { return {a, o, std::move(v)}; }

Policy single_clause_policy(std::string id, PolicyClause c, int severity = 2) {
  return Policy{std::move(id), "", severity, {{std::move(c)}}};
}

TEST(Clause, OperatorsAreCaseInsensitive) {
  const Event e = make_event("e", "Bob", 0, "C:/Users/Bob/Music/Song.MP3", "VLC.exe");
  EXPECT_TRUE(eval_clause(e, clause(ClauseAttribute::kApplication, ClauseOperator::kEquals, std::string("vlc.exe"))));
  EXPECT_FALSE(eval_clause(e, clause(ClauseAttribute::kApplication, ClauseOperator::kNotEquals, std::string("VLC.EXE"))));
  EXPECT_TRUE(eval_clause(e, clause(ClauseAttribute::kResource, ClauseOperator::kContains, std::string(".mp3"))));
  EXPECT_TRUE(eval_clause(
      e, clause(ClauseAttribute::kUser, ClauseOperator::kOneOf, std::vector<std::string>{"alice", "bob"})));
  EXPECT_FALSE(eval_clause(
      e, clause(ClauseAttribute::kUser, ClauseOperator::kOneOf, std::vector<std::string>{"alice"})));
}

TEST(Clause, HourRangeIsInclusiveAndWraps) {
  const PolicyClause night = clause(ClauseAttribute::kHourOfDay, ClauseOperator::kHourInRange, HourRange{22, 5});
  const PolicyClause day = clause(ClauseAttribute::kHourOfDay, ClauseOperator::kHourInRange, HourRange{9, 17});
  for (int h = 0; h < 24; ++h) {
    const Event e = make_event("e", "bob", day_start(100) + h * 3600 + 1799);
    EXPECT_EQ(eval_clause(e, night), h >= 22 || h <= 5) << h;
    EXPECT_EQ(eval_clause(e, day), h >= 9 && h <= 17) << h;
  }
}

TEST(Clause, MalformedValueShapeIsRejected) {
  EXPECT_THROW(validate_clause(clause(ClauseAttribute::kUser, ClauseOperator::kOneOf, std::string("bob"))), Error);
  EXPECT_THROW(validate_clause(clause(ClauseAttribute::kUser, ClauseOperator::kHourInRange, HourRange{1, 2})), Error);
  EXPECT_THROW(validate_clause(clause(ClauseAttribute::kHourOfDay, ClauseOperator::kHourInRange, HourRange{1, 24})),
               Error);
}

TEST(Policy, DisjunctionOfConjunctions) {
  Policy p{"P", "", 3,
           {{clause(ClauseAttribute::kApplication, ClauseOperator::kEquals, std::string("a.exe")),
             clause(ClauseAttribute::kResource, ClauseOperator::kContains, std::string("secret"))},
            {clause(ClauseAttribute::kUser, ClauseOperator::kEquals, std::string("eve"))}}};
  EXPECT_TRUE(eval_policy(make_event("1", "bob", 0, "/secret.doc", "a.exe"), p));
  EXPECT_FALSE(eval_policy(make_event("2", "bob", 0, "/public.doc", "a.exe"), p));
  EXPECT_TRUE(eval_policy(make_event("3", "eve", 0, "/public.doc", "b.exe"), p));
}

std::vector<Policy> match_all() {
  return {single_clause_policy("ALL", clause(ClauseAttribute::kResource, ClauseOperator::kContains, std::string("")))};
}

TEST(Bundling, OneHundredFiftyRapidTriggersSplitAtTheCap) {
  std::vector<Event> events;
  for (int i = 0; i < 150; ++i) events.push_back(make_event("e" + std::to_string(1000 + i), "bob", 1000 + i));
  const auto alerts = detect_stream(events, match_all());
  ASSERT_EQ(alerts.size(), 2u);
  EXPECT_EQ(alerts[0].events.size(), 100u);
  EXPECT_EQ(alerts[1].events.size(), 50u);
  EXPECT_EQ(alerts[1].alert_time, 1100);
}

TEST(Bundling, GapClosesBundle) {
  std::vector<Event> events{make_event("a", "bob", 0), make_event("b", "bob", 60), make_event("c", "bob", 121)};
  const auto alerts = detect_stream(events, match_all());
  ASSERT_EQ(alerts.size(), 2u);
  EXPECT_EQ(alerts[0].events.size(), 2u);
  EXPECT_EQ(alerts[1].events.size(), 1u);
}

TEST(Bundling, UnsortedInputIsAnOrderingError) {
  std::vector<Event> events{make_event("a", "bob", 10), make_event("b", "bob", 5)};
  try {
    detect_stream(events, match_all());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOrdering);
  }
}

TEST(Bundling, AlertIdsAreDeterministic) {
  std::vector<Event> events{make_event("a", "bob", 10)};
  EXPECT_EQ(detect_stream(events, match_all())[0].alert_id, detect_stream(events, match_all())[0].alert_id);
  EXPECT_EQ(detect_stream(events, match_all())[0].alert_id, policy::make_alert_id("ALL", "a"));
}

// Property: on random interleaved streams no alert mixes user, endpoint or
// application, none exceeds the cap, every trigger lands in exactly one
// alert per matching policy, and bundles respect the gap.
TEST(Bundling, RandomStreamsKeepBundleInvariants) {
  const std::vector<Policy> policies{
      single_clause_policy("APP", clause(ClauseAttribute::kApplication, ClauseOperator::kOneOf,
                                         std::vector<std::string>{"a.exe", "b.exe"})),
      single_clause_policy("RES", clause(ClauseAttribute::kResource, ClauseOperator::kContains, std::string("x")))};
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, 2), step(0, 40);
    std::vector<Event> events;
    Timestamp t = 0;
    for (int i = 0; i < 2000; ++i) {
      t += step(rng);
      const std::string n = std::to_string(i);
      Event e = make_event("e" + n, "u" + std::to_string(pick(rng)), t, pick(rng) ? "/x/f" : "/y/f",
                           std::string(1, static_cast<char>('a' + pick(rng))) + ".exe", "ws" + std::to_string(pick(rng)));
      events.push_back(e);
    }
    const auto alerts = detect_stream(events, policies);
    std::map<std::string, int> seen;  // policy|event -> count
    for (const Alert& a : alerts) {
      EXPECT_TRUE(validate_alert(a).empty()) << a.alert_id;
      EXPECT_LE(a.events.size(), kMaxEventsPerAlert);
      for (std::size_t k = 1; k < a.events.size(); ++k) {
        EXPECT_LE(a.events[k].start_time - a.events[k - 1].start_time, 60);
      }
      for (const Event& e : a.events) ++seen[a.policy_id + "|" + e.event_id];
    }
    std::size_t expected = 0;
    for (const Event& e : events) {
      for (const Policy& p : policies) {
        if (!eval_policy(e, p)) continue;
        ++expected;
        EXPECT_EQ(seen[p.policy_id + "|" + e.event_id], 1);
      }
    }
    EXPECT_EQ(seen.size(), expected);
    for (std::size_t k = 1; k < alerts.size(); ++k) {
      EXPECT_TRUE(alerts[k - 1].alert_time < alerts[k].alert_time ||
                  (alerts[k - 1].alert_time == alerts[k].alert_time && alerts[k - 1].alert_id < alerts[k].alert_id));
    }
  }
}

TEST(Bundling, SeverityAndPolicyCopiedFromPolicy) {
  auto p = single_clause_policy("SEV", clause(ClauseAttribute::kUser, ClauseOperator::kEquals, std::string("bob")), 5);
  std::vector<Event> events{make_event("a", "bob", 10)};
  const auto alerts = detect_stream(events, std::vector<Policy>{p});
  ASSERT_EQ(alerts.size(), 1u);
  EXPECT_EQ(alerts[0].severity, 5);
  EXPECT_EQ(alerts[0].policy_id, "SEV");
  EXPECT_EQ(alerts[0].alert_time, 10);
}

}  // namespace
}  // namespace alertlens
