#include <gtest/gtest.h>

#include <map>
#include <set>

#include "alertlens/core/error.hpp"
#include "alertlens/core/json_io.hpp"
#include "alertlens/core/resource.hpp"
#include "fixtures.hpp"

namespace alertlens {
namespace {

using synth::GeneratorConfig;
using synth::ScenarioKind;
using testing::scenario_corpus;
using testing::scenario_truth;

GeneratorConfig small_config(std::uint64_t seed = 3) {
  GeneratorConfig c;
  c.user_count = 600;
  c.day_count = 120;
  c.target_alerts = 30000;
  c.noise_reserve = 0;
  c.seed = seed;
  return c;
}

const synth::Corpus& shared_corpus() {
  static const synth::Corpus corpus = scenario_corpus();
  return corpus;
}

TEST(Generator, DeterministicForFixedSeed) {
  const auto a = synth::generate(small_config(), synth::default_policies());
  const auto b = synth::generate(small_config(), synth::default_policies());
  EXPECT_EQ(a.alerts, b.alerts);
  EXPECT_EQ(a.manifest, b.manifest);
  const auto c = synth::generate(small_config(4), synth::default_policies());
  EXPECT_NE(a.alerts, c.alerts);
}

TEST(Generator, AlertsAreWellFormedAndOrdered) {
  const auto corpus = synth::generate(small_config(), synth::default_policies());
  ASSERT_FALSE(corpus.alerts.empty());
  std::set<std::string> ids;
  for (std::size_t i = 0; i < corpus.alerts.size(); ++i) {
    const Alert& a = corpus.alerts[i];
    EXPECT_TRUE(validate_alert(a).empty()) << a.alert_id;
    EXPECT_TRUE(corpus.range.contains(a.alert_time));
    EXPECT_TRUE(ids.insert(a.alert_id).second);
    if (i > 0) {
      const Alert& p = corpus.alerts[i - 1];
      EXPECT_TRUE(p.alert_time < a.alert_time || (p.alert_time == a.alert_time && p.alert_id < a.alert_id));
    }
  }
}

// Re-running detection over the emitted events reproduces the alerts.
TEST(Generator, AlertsMatchPolicyEngineOverEvents) {
  const auto corpus = synth::generate(small_config(), synth::default_policies());
  const auto events = corpus.events();
  const auto again = policy::detect_stream(events, corpus.policies);
  EXPECT_EQ(again, corpus.alerts);
}

TEST(Generator, SmallCorpusStatsAreNearTargets) {
  const auto corpus = synth::generate(small_config(), synth::default_policies());
  const auto stats = synth::corpus_stats(corpus);
  EXPECT_NEAR(stats.single_event_fraction, 0.66, 0.03);
  EXPECT_GT(stats.rank_ratio(), 15.0);
  EXPECT_LT(stats.rank_ratio(), 50.0);
  EXPECT_NEAR(static_cast<double>(stats.total_alerts), 30000.0, 30000.0 * 0.1);
}

TEST(Generator, InvalidConfigIsRejected) {
  auto c = small_config();
  c.single_event_fraction = 1.5;
  EXPECT_THROW(synth::validate(c), Error);
  c = small_config();
  c.user_count = 0;
  EXPECT_THROW(synth::validate(c), Error);
}

// Independent recount of the stats from raw alerts.
TEST(Stats, MatchDirectRecount) {
  const auto& corpus = shared_corpus();
  const auto stats = synth::corpus_stats(corpus);
  std::map<std::string, std::size_t> per_user;
  std::map<DayIndex, std::size_t> per_week;
  std::size_t singles = 0;
  for (const Alert& a : corpus.alerts) {
    ++per_user[a.events.front().user];
    ++per_week[iso_week_start(day_of(a.alert_time))];
    singles += a.events.size() == 1;
  }
  std::vector<std::size_t> counts;
  for (auto& [u, n] : per_user) counts.push_back(n);
  std::sort(counts.rbegin(), counts.rend());
  std::size_t max_week = 0;
  for (auto& [w, n] : per_week) max_week = std::max(max_week, n);
  EXPECT_EQ(stats.total_alerts, corpus.alerts.size());
  EXPECT_EQ(stats.distinct_alerting_users, per_user.size());
  EXPECT_DOUBLE_EQ(stats.single_event_fraction, static_cast<double>(singles) / corpus.alerts.size());
  EXPECT_EQ(stats.rank1_count, counts[0]);
  EXPECT_EQ(stats.rank100_count, counts[99]);
  EXPECT_DOUBLE_EQ(stats.max_week_share, static_cast<double>(max_week) / corpus.alerts.size());
}

TEST(Scenarios, InjectionIsDeterministic) {
  const auto again = scenario_corpus();
  EXPECT_EQ(again.alerts, shared_corpus().alerts);
  EXPECT_EQ(again.manifest, shared_corpus().manifest);
}

TEST(Scenarios, WscriptBurstMatchesRecount) {
  const auto& corpus = shared_corpus();
  const Json& t = scenario_truth(corpus, "wscript_burst");
  ASSERT_FALSE(t.is_null());
  const DayIndex focus = parse_day(t.at("focus_day").get<std::string>());
  const std::string user = t.at("focus_user");
  std::size_t on_day = 0, in_hours = 0;
  std::set<std::string> users;
  const TimeRange window = t.at("window").get<TimeRange>();
  for (const Alert& a : corpus.alerts) {
    const Event& e = a.events.front();
    if (a.policy_id != t.at("policy_id").get<std::string>() || e.application != "wscript.exe") continue;
    if (window.contains(a.alert_time)) users.insert(e.user);
    if (e.user != user || day_of(a.alert_time) != focus) continue;
    ++on_day;
    const int h = hour_of(a.alert_time);
    in_hours += (h == 14 || h == 15);
  }
  EXPECT_EQ(on_day, 104u);
  EXPECT_EQ(in_hours, 96u);
  EXPECT_EQ(t.at("focus_alerts").get<std::size_t>(), on_day);
  EXPECT_EQ(t.at("focus_alerts_hours_14_15").get<std::size_t>(), in_hours);
  EXPECT_EQ(t.at("user_count").get<std::size_t>(), users.size());
}

TEST(Scenarios, AutosaveHumpMatchesRecount) {
  const auto& corpus = shared_corpus();
  const Json& t = scenario_truth(corpus, "autosave_file");
  ASSERT_FALSE(t.is_null());
  const std::string user = t.at("user");
  std::map<std::string, std::size_t> per_day;
  for (const Alert& a : corpus.alerts) {
    if (a.events.front().user == user) ++per_day[format_day(day_of(a.alert_time))];
  }
  std::size_t peak = 0;
  std::string peak_day;
  for (auto& [d, n] : per_day) {
    if (n > peak) peak = n, peak_day = d;
  }
  EXPECT_EQ(peak_day, t.at("peak_day").get<std::string>());
  EXPECT_EQ(peak, t.at("peak_count").get<std::size_t>());
  for (auto& [d, n] : t.at("hump").items()) EXPECT_EQ(per_day[d], n.get<std::size_t>()) << d;
  const TimeRange hump = t.at("hump_range").get<TimeRange>();
  for (auto& [d, n] : per_day) {
    if (!hump.contains(day_start(parse_day(d)))) EXPECT_LE(n, t.at("baseline_max_per_day").get<std::size_t>()) << d;
  }
}

TEST(Scenarios, UsbDescriptorsShareGuidsWithOtherUsers) {
  const auto& corpus = shared_corpus();
  const Json& t = scenario_truth(corpus, "usb_guid_share");
  ASSERT_FALSE(t.is_null());
  const auto descriptors = t.at("descriptors").get<std::vector<std::string>>();
  ASSERT_EQ(descriptors.size(), 3u);
  std::set<std::string> guids;
  for (const auto& d : descriptors) {
    const auto ref = parse_resource(d);
    for (const auto& g : ref.guids) guids.insert(g);
  }
  for (const auto& other : t.at("other_descriptors")) {
    const auto ref = parse_resource(other.get<std::string>());
    bool shares = false;
    for (const auto& g : ref.guids) shares |= guids.count(g) > 0;
    EXPECT_TRUE(shares) << other;
  }
  EXPECT_EQ(t.at("other_users").size(), 2u);
}

TEST(Scenarios, GiantAlertsCarryRecordedEventCounts) {
  const auto& corpus = shared_corpus();
  const Json& t = scenario_truth(corpus, "giant_alerts");
  ASSERT_FALSE(t.is_null());
  const auto ids = t.at("alert_ids").get<std::vector<std::string>>();
  const auto sizes = t.at("event_counts").get<std::vector<std::size_t>>();
  ASSERT_EQ(ids.size(), sizes.size());
  for (std::size_t k = 0; k < ids.size(); ++k) {
    auto it = std::find_if(corpus.alerts.begin(), corpus.alerts.end(), [&](const Alert& a) { return a.alert_id == ids[k]; });
    ASSERT_NE(it, corpus.alerts.end());
    EXPECT_EQ(it->events.size(), sizes[k]);
    EXPECT_GT(it->events.size(), kMaxEventsPerAlert);
  }
}

TEST(Scenarios, OutOfRangeDateIsConfigError) {
  auto corpus = synth::generate(small_config(), synth::default_policies());
  try {
    synth::inject_scenario(std::move(corpus), {ScenarioKind::kWscriptBurst, {{"focus_day", "2030-01-01"}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
}

TEST(Scenarios, RecommendedExclusionsRemoveNoise) {
  const auto& corpus = shared_corpus();
  const ExclusionSet ex = synth::recommended_exclusions(corpus.manifest);
  const std::string flood_user = scenario_truth(corpus, "pseudo_account_flood").at("user");
  EXPECT_TRUE(std::binary_search(ex.excluded_users.begin(), ex.excluded_users.end(), flood_user));
  const auto ids = scenario_truth(corpus, "giant_alerts").at("alert_ids").get<std::vector<std::string>>();
  for (const Alert& a : corpus.alerts) {
    if (std::find(ids.begin(), ids.end(), a.alert_id) != ids.end()) {
      EXPECT_TRUE(is_excluded(ex, a.events.front().user, a.alert_time));
    }
  }
  const auto cleaned = synth::corpus_stats(corpus.alerts, ex);
  EXPECT_LT(cleaned.max_week_share, 0.05);
  EXPECT_LT(cleaned.total_alerts, corpus.alerts.size());
}

TEST(Config, JsonRoundTrip) {
  GeneratorConfig c = small_config(99);
  c.tail_shape = 1.25;
  const Json j = c;
  const GeneratorConfig back = j.get<GeneratorConfig>();
  EXPECT_EQ(Json(back), j);
}

TEST(Scenarios, KindNamesRoundTrip) {
  for (auto k : synth::all_scenarios()) EXPECT_EQ(synth::parse_scenario_kind(synth::to_string(k)), k);
  EXPECT_THROW(synth::parse_scenario_kind("nope"), Error);
}

}  // namespace
}  // namespace alertlens
