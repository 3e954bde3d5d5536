#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "alertlens/core/json_io.hpp"
#include "alertlens/core/model.hpp"

namespace alertlens::synth {

struct GeneratorConfig {
  std::size_t user_count = 15000;
  int day_count = 820;  // ~27 months
  // Corpus size once the noise scenarios are injected. The base corpus gets
  // target_alerts - noise_reserve alerts.
  std::size_t target_alerts = 900000;
  std::size_t noise_reserve = 320000;
  // Pareto shape of per-user alert weights. Zero means "fit by bisection so
  // that the rank-1 / rank-100 weight ratio equals target_rank_ratio".
  double tail_shape = 0.0;
  double target_rank_ratio = 30.0;
  double single_event_fraction = 0.66;
  std::uint64_t seed = 42;
  DayIndex start_day = make_day(2019, 1, 28);

  std::size_t base_alerts() const { return target_alerts > noise_reserve ? target_alerts - noise_reserve : 0; }
  TimeRange range() const { return {day_start(start_day), day_start(start_day + day_count)}; }
};

void to_json(Json& j, const GeneratorConfig& c);
void from_json(const Json& j, GeneratorConfig& c);
// Throws Error(kConfig) on non-positive counts or a fraction outside (0,1).
void validate(const GeneratorConfig& c);

enum class ScenarioKind {
  kSetupSpike,
  kPolicySpikeWeek,
  kPseudoAccountFlood,
  kGiantAlerts,
  kWscriptBurst,
  kUsbGuidShare,
  kAutosaveFile,
};

std::string_view to_string(ScenarioKind k);
ScenarioKind parse_scenario_kind(std::string_view s);
// Injection order used when every scenario is requested; the weekly spike
// goes last so its share is measured against the finished corpus.
std::vector<ScenarioKind> all_scenarios();

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::kAutosaveFile;
  // Kind-specific overrides (dates as "YYYY-MM-DD", counts, user ids).
  // Missing keys take defaults anchored to the corpus range.
  Json params = Json::object();
};

struct Corpus {
  GeneratorConfig config;
  TimeRange range;
  std::vector<Policy> policies;
  std::vector<Alert> alerts;  // ordered by (alert_time, alert_id)
  Json manifest = Json::object();

  // Distinct events across all alerts, ordered by (start_time, event_id).
  std::vector<Event> events() const;
};

// Base corpus: power-law per-user volumes, geometric events per alert,
// weekday seasonality. Alerts come from running the policy engine over the
// generated events. Deterministic for a fixed config.
Corpus generate(const GeneratorConfig& config, std::span<const Policy> policies);

// Adds one scenario's events and alerts and records its ground truth under
// manifest["scenarios"]. Throws Error(kConfig) for dates outside the corpus.
Corpus inject_scenario(Corpus corpus, const ScenarioSpec& scenario);

// Writes events.jsonl, alerts.jsonl, policies.json and manifest.json.
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);

struct WeekCount {
  DayIndex week_start = 0;
  std::size_t alert_count = 0;
  bool operator==(const WeekCount&) const = default;
};

struct CorpusStats {
  std::size_t total_alerts = 0;
  std::size_t distinct_alerting_users = 0;
  double single_event_fraction = 0.0;
  std::size_t rank1_count = 0;
  std::size_t rank100_count = 0;  // zero when fewer than 100 users alerted
  std::vector<WeekCount> weekly_totals;
  double max_week_share = 0.0;

  double rank_ratio() const {
    return rank100_count == 0 ? 0.0 : static_cast<double>(rank1_count) / static_cast<double>(rank100_count);
  }
};

void to_json(Json& j, const CorpusStats& s);

CorpusStats corpus_stats(std::span<const Alert> alerts, const ExclusionSet& exclusions = {});
inline CorpusStats corpus_stats(const Corpus& corpus) { return corpus_stats(corpus.alerts); }

// Exclusion set covering every injected noise artifact recorded in the
// manifest (setup weeks, giant alerts, the spike week, the pseudo-account).
ExclusionSet recommended_exclusions(const Json& manifest);

}  // namespace alertlens::synth
