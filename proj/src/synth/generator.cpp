#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "alertlens/core/error.hpp"
#include "alertlens/core/hash.hpp"
#include "alertlens/policy/engine.hpp"
#include "alertlens/synth/generator.hpp"
#include "internal.hpp"

namespace alertlens::synth {

namespace detail {

int draw_event_count(Rng& rng, double single_event_fraction) {
  std::geometric_distribution<int> extra(single_event_fraction);
  return std::min<int>(1 + extra(rng), static_cast<int>(kMaxEventsPerAlert));
}

std::vector<Timestamp> draw_offsets(Rng& rng, int count) {
  std::uniform_int_distribution<Timestamp> step(1, 15);
  std::vector<Timestamp> out(static_cast<std::size_t>(count), 0);
  for (std::size_t i = 1; i < out.size(); ++i) out[i] = out[i - 1] + step(rng);
  return out;
}

std::vector<Timestamp> layout_runs(Rng& rng, Timestamp begin, Timestamp end, std::span<const RunPlan> runs) {
  if (runs.empty()) return {};
  Timestamp needed = 0;
  for (const auto& r : runs) needed += r.span() + kGeneratorGap + 1;
  // the last run only needs its own span inside the window
  needed -= kGeneratorGap + 1;
  Timestamp slack = (end - begin) - needed - 1;
  if (slack < 0) {
    throw Error(ErrorCode::kConfig, "too many alerts (" + std::to_string(runs.size()) + ") for window starting " +
                                        format_timestamp(begin));
  }
  std::uniform_int_distribution<Timestamp> pos(0, slack);
  std::vector<Timestamp> gaps(runs.size());
  for (auto& g : gaps) g = pos(rng);
  std::sort(gaps.begin(), gaps.end());
  std::vector<Timestamp> starts(runs.size());
  Timestamp consumed = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    starts[i] = begin + gaps[i] + consumed;
    consumed += runs[i].span() + kGeneratorGap + 1;
  }
  return starts;
}

void emit_run(Rng& rng, const RunPlan& run, Timestamp start, std::vector<Event>& out) {
  std::uniform_int_distribution<Timestamp> duration(0, 20);
  for (std::size_t i = 0; i < run.offsets.size(); ++i) {
    Event e;
    e.user = run.user;
    e.endpoint = run.endpoint;
    e.application = run.application;
    e.resource = run.resources[i];
    e.resource_type = run.resource_type;
    e.activity = run.activity;
    e.start_time = start + run.offsets[i];
    e.end_time = e.start_time + duration(rng);
    out.push_back(std::move(e));
  }
}

void assign_event_ids(std::vector<Event>& events, const std::string& prefix) {
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.start_time != b.start_time) return a.start_time < b.start_time;
    if (a.user != b.user) return a.user < b.user;
    if (a.application != b.application) return a.application < b.application;
    return a.resource < b.resource;
  });
  char buf[24];
  for (std::size_t i = 0; i < events.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%09zu", i);
    events[i].event_id = prefix + buf;
  }
}

std::string random_guid(Rng& rng) {
  std::uint64_t hi = rng();
  std::uint64_t lo = rng();
  std::string h = to_hex(hi) + to_hex(lo);
  return h.substr(0, 8) + '-' + h.substr(8, 4) + '-' + h.substr(12, 4) + '-' + h.substr(16, 4) + '-' + h.substr(20, 12);
}

std::uint64_t stream_seed(std::uint64_t seed, std::string_view salt) { return fnv1a(salt, seed ^ 0x9e3779b97f4a7c15ULL); }

std::string padded_id(std::string_view prefix, std::size_t n, std::size_t user_count) {
  const int width = std::max(5, static_cast<int>(std::to_string(user_count).size()));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%0*zu", width, n);
  return std::string(prefix) + buf;
}

std::vector<const Event*> unique_events(std::span<const Alert> alerts) {
  std::vector<const Event*> all;
  for (const auto& a : alerts) {
    for (const auto& e : a.events) all.push_back(&e);
  }
  std::sort(all.begin(), all.end(), [](const Event* a, const Event* b) {
    return a->start_time != b->start_time ? a->start_time < b->start_time : a->event_id < b->event_id;
  });
  all.erase(std::unique(all.begin(), all.end(), [](const Event* a, const Event* b) { return a->event_id == b->event_id; }),
            all.end());
  return all;
}

}  // namespace detail

using detail::Rng;
using detail::RunPlan;

namespace {

constexpr std::array<std::string_view, 7> kScenarioNames{
    "setup_spike", "policy_spike_week", "pseudo_account_flood", "giant_alerts",
    "wscript_burst", "usb_guid_share", "autosave_file"};

// Base activity profiles; each triggers exactly one default policy.
enum class Profile { kMedia, kCloud, kDelete, kExeDownload, kScript, kUsb, kNight, kCount };
constexpr std::array<double, 7> kProfileWeights{0.34, 0.24, 0.14, 0.10, 0.07, 0.07, 0.04};

struct SynthUser {
  std::string name;
  std::string endpoint;
  std::array<std::string, 2> usb_guids;
  std::discrete_distribution<int> profiles;
};

std::string event_resource(Rng& rng, Profile profile, const SynthUser& user, const std::string& app) {
  static const std::vector<std::string> kDocNames{"report", "notes", "budget", "plan", "minutes", "slides", "contract"};
  static const std::vector<std::string> kDocExt{".docx", ".xlsx", ".pptx", ".pdf"};
  std::uniform_int_distribution<int> idx(0, 199);
  const std::string home = "C:/Users/" + user.name;
  switch (profile) {
    case Profile::kMedia:
      return (idx(rng) % 3 == 0) ? home + "/Videos/clip_" + std::to_string(idx(rng)) + ".mp4"
                                 : home + "/Music/track_" + std::to_string(idx(rng)) + ".mp3";
    case Profile::kCloud:
      return home + "/Documents/" + detail::pick(rng, kDocNames) + "_" + std::to_string(idx(rng)) +
             detail::pick(rng, kDocExt);
    case Profile::kDelete:
      return home + "/Documents/old_" + detail::pick(rng, kDocNames) + "_" + std::to_string(idx(rng)) +
             detail::pick(rng, kDocExt);
    case Profile::kExeDownload:
      return home + "/Downloads/setup_" + std::to_string(idx(rng)) + ".exe";
    case Profile::kScript:
      return "C:/Windows/System32/" + app;
    case Profile::kUsb: {
      const auto& g = user.usb_guids[static_cast<std::size_t>(idx(rng) % 4 == 0)];
      return "USBSTOR\\Disk&Ven_SanDisk&Prod_Cruzer_Blade\\{" + g + "}";
    }
    case Profile::kNight:
      return "C:/Shares/Finance/confidential_" + std::to_string(idx(rng)) + ".pdf";
    case Profile::kCount: break;
  }
  return {};
}

RunPlan plan_run(Rng& rng, Profile profile, const SynthUser& user, int event_count) {
  static const std::vector<std::string> kMediaApps{"vlc.exe", "wmplayer.exe", "spotify.exe"};
  static const std::vector<std::string> kCloudApps{"onedrive.exe", "dropbox.exe"};
  static const std::vector<std::string> kBrowserApps{"chrome.exe", "msedge.exe"};
  static const std::vector<std::string> kScriptApps{"cscript.exe", "powershell.exe"};

  RunPlan run;
  run.user = user.name;
  run.endpoint = user.endpoint;
  switch (profile) {
    case Profile::kMedia:
      run.application = detail::pick(rng, kMediaApps);
      run.activity = Activity::kRead;
      break;
    case Profile::kCloud:
      run.application = detail::pick(rng, kCloudApps);
      run.activity = std::uniform_int_distribution<int>(0, 4)(rng) == 0 ? Activity::kCreate : Activity::kUpdate;
      break;
    case Profile::kDelete:
      run.application = "explorer.exe";
      run.activity = Activity::kDelete;
      break;
    case Profile::kExeDownload:
      run.application = detail::pick(rng, kBrowserApps);
      run.activity = Activity::kCreate;
      break;
    case Profile::kScript:
      run.application = detail::pick(rng, kScriptApps);
      run.activity = Activity::kRead;
      break;
    case Profile::kUsb:
      run.application = "system";
      run.activity = Activity::kMount;
      run.resource_type = ResourceType::kUsbDevice;
      break;
    case Profile::kNight:
      run.application = "acrord32.exe";
      run.activity = Activity::kRead;
      break;
    case Profile::kCount: break;
  }
  run.offsets = detail::draw_offsets(rng, event_count);
  for (int i = 0; i < event_count; ++i) run.resources.push_back(event_resource(rng, profile, user, run.application));
  return run;
}

// Smallest-to-largest uniforms u map to Pareto weights u^(-1/shape); the
// rank-1 / rank-k weight ratio is monotone decreasing in shape.
double fit_tail_shape(const std::vector<double>& sorted_uniforms, std::size_t rank, double target_ratio) {
  const double lo_u = sorted_uniforms.front();
  const double k_u = sorted_uniforms[std::min(rank, sorted_uniforms.size()) - 1];
  auto ratio = [&](double shape) { return std::pow(lo_u, -1.0 / shape) / std::pow(k_u, -1.0 / shape); };
  double lo = 0.05, hi = 50.0;
  for (int iter = 0; iter < 200; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (ratio(mid) > target_ratio) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::string_view to_string(ScenarioKind k) { return kScenarioNames[static_cast<std::size_t>(k)]; }

ScenarioKind parse_scenario_kind(std::string_view s) {
  for (std::size_t i = 0; i < kScenarioNames.size(); ++i) {
    if (kScenarioNames[i] == s) return static_cast<ScenarioKind>(i);
  }
  throw Error(ErrorCode::kConfig, "unknown scenario kind '" + std::string(s) + "'");
}

std::vector<ScenarioKind> all_scenarios() {
  return {ScenarioKind::kSetupSpike,    ScenarioKind::kGiantAlerts,   ScenarioKind::kPseudoAccountFlood,
          ScenarioKind::kWscriptBurst,  ScenarioKind::kUsbGuidShare,  ScenarioKind::kAutosaveFile,
          ScenarioKind::kPolicySpikeWeek};
}

void to_json(Json& j, const GeneratorConfig& c) {
  j = Json{{"user_count", c.user_count},
           {"day_count", c.day_count},
           {"target_alerts", c.target_alerts},
           {"noise_reserve", c.noise_reserve},
           {"tail_shape", c.tail_shape},
           {"target_rank_ratio", c.target_rank_ratio},
           {"single_event_fraction", c.single_event_fraction},
           {"seed", c.seed},
           {"start_date", format_day(c.start_day)}};
}

void from_json(const Json& j, GeneratorConfig& c) {
  GeneratorConfig d;
  c.user_count = j.value("user_count", d.user_count);
  c.day_count = j.value("day_count", d.day_count);
  c.target_alerts = j.value("target_alerts", d.target_alerts);
  c.noise_reserve = j.value("noise_reserve", d.noise_reserve);
  c.tail_shape = j.value("tail_shape", d.tail_shape);
  c.target_rank_ratio = j.value("target_rank_ratio", d.target_rank_ratio);
  c.single_event_fraction = j.value("single_event_fraction", d.single_event_fraction);
  c.seed = j.value("seed", d.seed);
  c.start_day = j.contains("start_date") ? parse_day(j.at("start_date").get<std::string>()) : d.start_day;
}

void validate(const GeneratorConfig& c) {
  if (c.user_count == 0 || c.day_count <= 0 || c.target_alerts == 0) {
    throw Error(ErrorCode::kConfig, "user_count, day_count and target_alerts must be positive");
  }
  if (c.noise_reserve >= c.target_alerts) throw Error(ErrorCode::kConfig, "noise_reserve must be below target_alerts");
  if (!(c.single_event_fraction > 0.0 && c.single_event_fraction < 1.0)) {
    throw Error(ErrorCode::kConfig, "single_event_fraction must lie in (0, 1)");
  }
  if (c.tail_shape < 0.0 || !(c.target_rank_ratio > 1.0)) {
    throw Error(ErrorCode::kConfig, "tail_shape must be >= 0 and target_rank_ratio > 1");
  }
}

std::vector<Event> Corpus::events() const {
  const auto all = detail::unique_events(alerts);
  std::vector<Event> out;
  out.reserve(all.size());
  for (const auto* e : all) out.push_back(*e);
  return out;
}

Corpus generate(const GeneratorConfig& config, std::span<const Policy> policies) {
  validate(config);
  if (policies.empty()) throw Error(ErrorCode::kConfig, "at least one policy is required");
  for (const auto& p : policies) validate_policy(p);

  Rng rng(config.seed);
  const std::size_t n_users = config.user_count;

  // Per-user Pareto weights from common random numbers, shape fitted to the
  // target rank ratio.
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> uniforms(n_users);
  for (auto& u : uniforms) u = std::max(unit(rng), 1e-12);
  double shape = config.tail_shape;
  const bool fitted = shape <= 0.0;
  if (fitted) {
    std::vector<double> sorted = uniforms;
    std::sort(sorted.begin(), sorted.end());
    shape = fit_tail_shape(sorted, 100, config.target_rank_ratio);
  }
  std::vector<double> weights(n_users);
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < n_users; ++i) {
    weights[i] = std::pow(uniforms[i], -1.0 / shape);
    weight_sum += weights[i];
  }

  std::vector<SynthUser> users(n_users);
  std::normal_distribution<double> mix_noise(0.0, 0.75);
  for (std::size_t i = 0; i < n_users; ++i) {
    auto& u = users[i];
    u.name = detail::padded_id("u", i, n_users);
    u.endpoint = detail::padded_id("ws-", i, n_users);
    u.usb_guids = {detail::random_guid(rng), detail::random_guid(rng)};
    std::array<double, 7> mix{};
    for (std::size_t p = 0; p < mix.size(); ++p) mix[p] = kProfileWeights[p] * std::exp(mix_noise(rng));
    u.profiles = std::discrete_distribution<int>(mix.begin(), mix.end());
  }

  std::vector<double> day_weights(static_cast<std::size_t>(config.day_count));
  for (int d = 0; d < config.day_count; ++d) {
    const DayIndex day = config.start_day + d;
    const double weekday = weekday_of(day) < 5 ? 1.0 : 0.25;
    day_weights[static_cast<std::size_t>(d)] = weekday * (1.0 + 0.15 * std::sin(2.0 * std::numbers::pi * day / 365.25));
  }
  std::discrete_distribution<int> pick_day(day_weights.begin(), day_weights.end());

  const double budget = static_cast<double>(config.base_alerts());
  std::vector<Event> events;
  events.reserve(static_cast<std::size_t>(budget * 1.6));

  struct Planned {
    int day;
    bool night;
    RunPlan run;
  };
  std::vector<Planned> planned;
  std::vector<RunPlan> window_runs;
  for (std::size_t i = 0; i < n_users; ++i) {
    std::poisson_distribution<long> count_dist(budget * weights[i] / weight_sum);
    const long n = count_dist(rng);
    planned.clear();
    for (long a = 0; a < n; ++a) {
      const auto profile = static_cast<Profile>(users[i].profiles(rng));
      const int day = pick_day(rng);
      const int k = detail::draw_event_count(rng, config.single_event_fraction);
      planned.push_back({day, profile == Profile::kNight, plan_run(rng, profile, users[i], k)});
    }
    std::stable_sort(planned.begin(), planned.end(), [](const Planned& a, const Planned& b) {
      return a.day != b.day ? a.day < b.day : a.night < b.night;
    });
    for (std::size_t lo = 0; lo < planned.size();) {
      std::size_t hi = lo;
      while (hi < planned.size() && planned[hi].day == planned[lo].day && planned[hi].night == planned[lo].night) ++hi;
      window_runs.clear();
      for (std::size_t r = lo; r < hi; ++r) window_runs.push_back(std::move(planned[r].run));
      const Timestamp base = day_start(config.start_day + planned[lo].day);
      const bool night = planned[lo].night;
      const auto starts = detail::layout_runs(rng, base + (night ? 0 : 7 * 3600), base + (night ? 5 : 19) * 3600,
                                              window_runs);
      for (std::size_t r = 0; r < window_runs.size(); ++r) detail::emit_run(rng, window_runs[r], starts[r], events);
      lo = hi;
    }
  }

  detail::assign_event_ids(events, "ev");
  Corpus corpus;
  corpus.config = config;
  corpus.range = config.range();
  corpus.policies.assign(policies.begin(), policies.end());
  corpus.alerts = policy::detect_stream(events, corpus.policies);
  events.clear();
  events.shrink_to_fit();

  corpus.manifest = Json{{"generator", config},
                         {"range", corpus.range},
                         {"tail_shape", shape},
                         {"tail_shape_fitted", fitted},
                         {"base_alerts", corpus.alerts.size()},
                         {"total_alerts", corpus.alerts.size()},
                         {"scenarios", Json::array()}};
  return corpus;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "alerts.jsonl", std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + (dir / "alerts.jsonl").string());
    for (const auto& a : corpus.alerts) write_alert_line(out, a);
  }
  {
    std::ofstream out(dir / "events.jsonl", std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + (dir / "events.jsonl").string());
    for (const auto* e : detail::unique_events(corpus.alerts)) write_event_line(out, *e);
  }
  write_file((dir / "policies.json").string(), Json(corpus.policies).dump(2) + "\n");
  write_file((dir / "manifest.json").string(), corpus.manifest.dump(2) + "\n");
}

ExclusionSet recommended_exclusions(const Json& manifest) {
  ExclusionSet out;
  for (const auto& s : manifest.value("scenarios", Json::array())) {
    const auto& truth = s.at("truth");
    if (truth.contains("exclude_range")) out.excluded_ranges.push_back(truth.at("exclude_range").get<TimeRange>());
    if (truth.contains("exclude_user")) out.excluded_users.push_back(truth.at("exclude_user").get<std::string>());
  }
  return normalize(std::move(out));
}

}  // namespace alertlens::synth
