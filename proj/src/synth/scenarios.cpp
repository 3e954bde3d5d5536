#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "alertlens/core/error.hpp"
#include "alertlens/policy/engine.hpp"
#include "alertlens/synth/default_policies.hpp"
#include "alertlens/synth/generator.hpp"
#include "internal.hpp"

namespace alertlens::synth {

using detail::Rng;
using detail::RunPlan;

namespace {

struct Placed {
  DayIndex day;
  RunPlan run;
};

class ScenarioContext {
 public:
  ScenarioContext(const Corpus& corpus, const ScenarioSpec& spec)
      : corpus_(corpus),
        params_(spec.params.is_object() ? spec.params : Json::object()),
        kind_(spec.kind),
        rng_(detail::stream_seed(corpus.config.seed, to_string(spec.kind))) {}

  Rng& rng() { return rng_; }
  DayIndex first_day() const { return corpus_.config.start_day; }
  DayIndex last_day() const { return corpus_.config.start_day + corpus_.config.day_count - 1; }

  DayIndex day(const char* key, DayIndex fallback) {
    DayIndex d = params_.contains(key) ? parse_day(params_.at(key).get<std::string>()) : fallback;
    check_day(d, key);
    resolved_[key] = format_day(d);
    return d;
  }

  void check_day(DayIndex d, std::string_view what) const {
    if (d < first_day() || d > last_day()) {
      throw Error(ErrorCode::kConfig, std::string(to_string(kind_)) + ": " + std::string(what) + " " + format_day(d) +
                                          " lies outside the corpus range " + format_day(first_day()) + ".." +
                                          format_day(last_day()));
    }
  }

  template <typename T>
  T get(const char* key, T fallback) {
    T v = params_.contains(key) ? params_.at(key).get<T>() : fallback;
    resolved_[key] = v;
    return v;
  }

  std::string base_user(std::size_t i) const { return detail::padded_id("u", i, corpus_.config.user_count); }
  std::string base_endpoint(std::size_t i) const { return detail::padded_id("ws-", i, corpus_.config.user_count); }

  // Distinct base-user indices.
  std::vector<std::size_t> sample_users(std::size_t n) {
    const std::size_t total = corpus_.config.user_count;
    if (n > total) throw Error(ErrorCode::kConfig, "scenario needs more users than the corpus has");
    std::vector<std::size_t> idx(total);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng_);
    idx.resize(n);
    return idx;
  }

  const Json& resolved() const { return resolved_; }
  ScenarioKind kind() const { return kind_; }

 private:
  const Corpus& corpus_;
  Json params_;
  ScenarioKind kind_;
  Rng rng_;
  Json resolved_ = Json::object();
};

RunPlan make_run(std::string user, std::string endpoint, std::string app, ResourceType type, Activity activity,
                 std::vector<std::string> resources, std::vector<Timestamp> offsets) {
  RunPlan run;
  run.user = std::move(user);
  run.endpoint = std::move(endpoint);
  run.application = std::move(app);
  run.resource_type = type;
  run.activity = activity;
  run.resources = std::move(resources);
  run.offsets = std::move(offsets);
  return run;
}

RunPlan single(std::string user, std::string endpoint, std::string app, ResourceType type, Activity activity,
               std::string resource) {
  return make_run(std::move(user), std::move(endpoint), std::move(app), type, activity, {std::move(resource)}, {0});
}

// Groups runs by (day, user) and lays each group out inside the daily
// window [day + from_hour, day + to_hour).
void place(Rng& rng, std::vector<Placed>& placed, Timestamp from_offset, Timestamp to_offset,
           std::vector<Event>& out) {
  std::stable_sort(placed.begin(), placed.end(), [](const Placed& a, const Placed& b) {
    return a.day != b.day ? a.day < b.day : a.run.user < b.run.user;
  });
  std::vector<RunPlan> group;
  for (std::size_t lo = 0; lo < placed.size();) {
    std::size_t hi = lo;
    while (hi < placed.size() && placed[hi].day == placed[lo].day && placed[hi].run.user == placed[lo].run.user) ++hi;
    group.clear();
    for (std::size_t i = lo; i < hi; ++i) group.push_back(std::move(placed[i].run));
    std::shuffle(group.begin(), group.end(), rng);
    const Timestamp base = day_start(placed[lo].day);
    const auto starts = detail::layout_runs(rng, base + from_offset, base + to_offset, group);
    for (std::size_t i = 0; i < group.size(); ++i) detail::emit_run(rng, group[i], starts[i], out);
    lo = hi;
  }
  placed.clear();
}

std::vector<Alert> detect(std::vector<Event>& events, const Corpus& corpus, ScenarioKind kind) {
  detail::assign_event_ids(events, "ev-" + std::string(to_string(kind)) + "-");
  return policy::detect_stream(events, corpus.policies);
}

void merge_alerts(Corpus& corpus, std::vector<Alert> added) {
  auto by_time = [](const Alert& a, const Alert& b) {
    return a.alert_time != b.alert_time ? a.alert_time < b.alert_time : a.alert_id < b.alert_id;
  };
  std::sort(added.begin(), added.end(), by_time);
  const auto mid = static_cast<std::ptrdiff_t>(corpus.alerts.size());
  corpus.alerts.insert(corpus.alerts.end(), std::make_move_iterator(added.begin()),
                       std::make_move_iterator(added.end()));
  std::inplace_merge(corpus.alerts.begin(), corpus.alerts.begin() + mid, corpus.alerts.end(), by_time);
}

std::map<std::string, std::size_t> count_by_policy(const std::vector<Alert>& alerts) {
  std::map<std::string, std::size_t> out;
  for (const auto& a : alerts) ++out[a.policy_id];
  return out;
}

Json range_json(DayIndex first, DayIndex end_exclusive) {
  return Json(TimeRange{day_start(first), day_start(end_exclusive)});
}

constexpr Timestamp kHour = 3600;

const std::vector<std::string> kDocNames{"report", "notes", "budget", "plan", "minutes", "contract"};

std::string doc_path(Rng& rng, const std::string& user) {
  std::uniform_int_distribution<int> idx(0, 199);
  return "C:/Users/" + user + "/Documents/" + detail::pick(rng, kDocNames) + "_" + std::to_string(idx(rng)) + ".docx";
}

// ---------------------------------------------------------------------------

Json setup_spike(ScenarioContext& ctx, Corpus& corpus) {
  const DayIndex start = ctx.day("start", ctx.first_day());
  const int days = ctx.get<int>("days", 14);
  const std::size_t count = ctx.get<std::size_t>("count", 40000);
  ctx.check_day(start + days - 1, "end");

  auto& rng = ctx.rng();
  std::uniform_int_distribution<std::size_t> user_dist(0, corpus.config.user_count - 1);
  std::uniform_int_distribution<int> day_dist(0, days - 1);
  std::uniform_int_distribution<int> track(0, 499);
  std::vector<Placed> placed;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t u = user_dist(rng);
    const int k = detail::draw_event_count(rng, corpus.config.single_event_fraction);
    std::vector<std::string> resources;
    for (int e = 0; e < k; ++e) {
      resources.push_back("C:/Users/" + ctx.base_user(u) + "/Music/library/track_" + std::to_string(track(rng)) + ".mp3");
    }
    placed.push_back({start + day_dist(rng), make_run(ctx.base_user(u), ctx.base_endpoint(u), "groove.exe",
                                                      ResourceType::kFile, Activity::kRead, std::move(resources),
                                                      detail::draw_offsets(rng, k))});
  }
  std::vector<Event> events;
  place(rng, placed, 7 * kHour, 19 * kHour, events);
  auto alerts = detect(events, corpus, ctx.kind());
  Json truth{{"alerts", alerts.size()},
             {"range", range_json(start, start + days)},
             {"exclude_range", range_json(start, start + days)}};
  merge_alerts(corpus, std::move(alerts));
  return truth;
}

Json policy_spike_week(ScenarioContext& ctx, Corpus& corpus) {
  DayIndex default_week = iso_week_start(ctx.first_day() + 616);
  if (default_week + 6 > ctx.last_day()) default_week = iso_week_start(ctx.last_day() - 6);
  if (default_week < ctx.first_day()) default_week += 7;
  const DayIndex week = iso_week_start(ctx.day("week_start", default_week));
  ctx.check_day(week, "week_start");
  ctx.check_day(week + 6, "week end");
  const double share = ctx.get<double>("share", 0.20);
  if (!(share > 0.0 && share < 1.0)) throw Error(ErrorCode::kConfig, "policy_spike_week: share must lie in (0,1)");

  const TimeRange week_range{day_start(week), day_start(week + 7)};
  const auto total = static_cast<double>(corpus.alerts.size());
  const auto in_week = static_cast<double>(std::count_if(corpus.alerts.begin(), corpus.alerts.end(),
                                                         [&](const Alert& a) { return week_range.contains(a.alert_time); }));
  const double needed = std::ceil((share * total - in_week) / (1.0 - share));
  const std::size_t count = ctx.get<std::size_t>("count", needed > 0 ? static_cast<std::size_t>(needed) : 0);

  auto& rng = ctx.rng();
  std::uniform_int_distribution<std::size_t> user_dist(0, corpus.config.user_count - 1);
  std::discrete_distribution<int> weekday({1.0, 1.0, 1.0, 1.0, 1.0, 0.25, 0.25});
  std::vector<Placed> placed;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t u = user_dist(rng);
    const std::string user = ctx.base_user(u);
    const int k = detail::draw_event_count(rng, corpus.config.single_event_fraction);
    std::vector<std::string> resources;
    for (int e = 0; e < k; ++e) resources.push_back(doc_path(rng, user));
    placed.push_back({week + weekday(rng), make_run(user, ctx.base_endpoint(u), "splwow64.exe", ResourceType::kFile,
                                                    Activity::kRead, std::move(resources), detail::draw_offsets(rng, k))});
  }
  std::vector<Event> events;
  place(rng, placed, 7 * kHour, 19 * kHour, events);
  auto alerts = detect(events, corpus, ctx.kind());
  const std::size_t added = alerts.size();
  merge_alerts(corpus, std::move(alerts));
  const double share_after = (in_week + static_cast<double>(added)) / static_cast<double>(corpus.alerts.size());
  return Json{{"week_start", format_day(week)},
              {"alerts", added},
              {"policy_id", policy_ids::kPrint},
              {"week_share", share_after},
              {"exclude_range", range_json(week, week + 7)}};
}

Json pseudo_account_flood(ScenarioContext& ctx, Corpus& corpus) {
  const DayIndex start = ctx.day("start", std::min(ctx.first_day() + 658, ctx.last_day()));
  const std::size_t count = ctx.get<std::size_t>("count", 100000);
  const std::string user = ctx.get<std::string>("user", "svc-sync01");
  const std::string app = ctx.get<std::string>("application", "onedrive.exe");
  const std::string resource = "C:/ProgramData/SyncService/state.db";

  auto& rng = ctx.rng();
  const auto days = static_cast<std::size_t>(ctx.last_day() - start + 1);
  std::vector<Placed> placed;
  for (std::size_t d = 0; d < days; ++d) {
    const std::size_t n = count / days + (d < count % days ? 1 : 0);
    for (std::size_t i = 0; i < n; ++i) {
      const int k = detail::draw_event_count(rng, corpus.config.single_event_fraction);
      placed.push_back({start + static_cast<DayIndex>(d),
                        make_run(user, "srv-sync01", app, ResourceType::kFile, Activity::kUpdate,
                                 std::vector<std::string>(static_cast<std::size_t>(k), resource),
                                 detail::draw_offsets(rng, k))});
    }
  }
  std::vector<Event> events;
  place(rng, placed, 0, 23 * kHour, events);
  auto alerts = detect(events, corpus, ctx.kind());
  Json truth{{"user", user},
             {"application", app},
             {"start", format_day(start)},
             {"alerts", alerts.size()},
             {"policies", count_by_policy(alerts)},
             {"exclude_user", user}};
  merge_alerts(corpus, std::move(alerts));
  return truth;
}

// Pre-cap bundles from long video playback. These bypass the policy engine
// on purpose so the cleaning path has oversized alerts to remove.
Json giant_alerts(ScenarioContext& ctx, Corpus& corpus) {
  const DayIndex start = ctx.day("start", ctx.first_day());
  const int days = ctx.get<int>("days", 21);
  const int count = ctx.get<int>("count", 6);
  const int min_events = ctx.get<int>("min_events", 1000);
  const int max_events = ctx.get<int>("max_events", 2500);
  ctx.check_day(start + days - 1, "end");
  if (min_events <= static_cast<int>(kMaxEventsPerAlert) || max_events < min_events) {
    throw Error(ErrorCode::kConfig, "giant_alerts: event counts must exceed the per-alert cap");
  }
  const Policy* media = nullptr;
  for (const auto& p : corpus.policies) {
    if (p.policy_id == policy_ids::kMedia) media = &p;
  }
  if (media == nullptr) throw Error(ErrorCode::kConfig, "giant_alerts needs the media playback policy");

  auto& rng = ctx.rng();
  std::uniform_int_distribution<std::size_t> user_dist(0, corpus.config.user_count - 1);
  std::uniform_int_distribution<int> day_dist(0, days - 1);
  std::uniform_int_distribution<int> size_dist(min_events, max_events);
  std::uniform_int_distribution<Timestamp> clock(9 * kHour, 12 * kHour);
  std::vector<Alert> alerts;
  Json ids = Json::array();
  Json sizes = Json::array();
  for (int i = 0; i < count; ++i) {
    const std::size_t u = user_dist(rng);
    const Timestamp t0 = day_start(start + day_dist(rng)) + clock(rng);
    const std::string movie = "C:/Users/" + ctx.base_user(u) + "/Videos/movie_" + std::to_string(i) + ".mp4";
    Alert alert;
    const int n = size_dist(rng);
    for (int e = 0; e < n; ++e) {
      Event ev;
      ev.event_id = "ev-giant_alerts-" + std::to_string(i) + "-" + std::to_string(e);
      ev.user = ctx.base_user(u);
      ev.endpoint = ctx.base_endpoint(u);
      ev.application = "wmplayer.exe";
      ev.resource = movie;
      ev.resource_type = ResourceType::kFile;
      ev.activity = Activity::kRead;
      ev.start_time = t0 + 5 * e;
      ev.end_time = ev.start_time + 5;
      alert.events.push_back(std::move(ev));
    }
    alert.policy_id = media->policy_id;
    alert.severity = media->severity;
    alert.alert_time = alert.events.front().start_time;
    alert.alert_id = policy::make_alert_id(alert.policy_id, alert.events.front().event_id);
    ids.push_back(alert.alert_id);
    sizes.push_back(n);
    alerts.push_back(std::move(alert));
  }
  Json truth{{"alerts", alerts.size()},
             {"alert_ids", ids},
             {"event_counts", sizes},
             {"exclude_range", range_json(start, start + days)}};
  merge_alerts(corpus, std::move(alerts));
  return truth;
}

Json wscript_burst(ScenarioContext& ctx, Corpus& corpus) {
  const DayIndex focus = ctx.day("focus_day", ctx.last_day());
  const int window_days = ctx.get<int>("window_days", 56);
  const DayIndex window_start = focus - window_days;
  ctx.check_day(window_start, "window start");
  const std::string focus_user = ctx.get<std::string>("focus_user", "s-wscript");
  const int focus_alerts = ctx.get<int>("focus_alerts", 104);
  const int focus_in_hours = ctx.get<int>("focus_in_hours", 96);
  const std::size_t other_users = ctx.get<std::size_t>("other_users", 196);
  if (focus_in_hours > focus_alerts || focus_in_hours < 0) {
    throw Error(ErrorCode::kConfig, "wscript_burst: focus_in_hours must lie in 0..focus_alerts");
  }
  const std::string seed_resource = "C:/Windows/System32/wscript.exe";
  const std::string app = "wscript.exe";

  auto& rng = ctx.rng();
  std::vector<Event> events;
  std::vector<Placed> placed;
  const std::string focus_endpoint = "ws-" + focus_user;
  for (int i = 0; i < focus_in_hours; ++i) {
    placed.push_back({focus, single(focus_user, focus_endpoint, app, ResourceType::kFile, Activity::kRead, seed_resource)});
  }
  place(rng, placed, 14 * kHour, 16 * kHour, events);
  for (int i = focus_in_hours; i < focus_alerts; ++i) {
    placed.push_back({focus, single(focus_user, focus_endpoint, app, ResourceType::kFile, Activity::kRead, seed_resource)});
  }
  place(rng, placed, 9 * kHour, 13 * kHour, events);

  std::set<std::string> exact_users{focus_user};
  std::set<std::string> all_users{focus_user};
  std::uniform_int_distribution<int> per_user(1, 3);
  std::uniform_int_distribution<int> day_dist(0, window_days - 1);
  std::uniform_int_distribution<int> variant(0, 3);
  for (std::size_t u : ctx.sample_users(other_users)) {
    const std::string user = ctx.base_user(u);
    all_users.insert(user);
    const int n = per_user(rng);
    for (int i = 0; i < n; ++i) {
      std::string path;
      switch (variant(rng)) {
        case 0: path = seed_resource; exact_users.insert(user); break;
        case 1: path = "C:/Windows/SysWOW64/wscript.exe"; break;
        case 2: path = "C:\\Windows\\System32\\WScript.exe"; break;
        default: path = "C:/Users/" + user + "/AppData/Local/Temp/wscript.exe"; break;
      }
      placed.push_back({window_start + day_dist(rng),
                        single(user, ctx.base_endpoint(u), app, ResourceType::kFile, Activity::kRead, path)});
    }
  }
  place(rng, placed, 9 * kHour, 17 * kHour, events);

  auto alerts = detect(events, corpus, ctx.kind());
  std::size_t focus_count = 0, focus_hour_count = 0;
  for (const auto& a : alerts) {
    if (a.events.front().user == focus_user && day_of(a.alert_time) == focus) {
      ++focus_count;
      const int h = hour_of(a.alert_time);
      focus_hour_count += (h == 14 || h == 15) ? 1 : 0;
    }
  }
  Json truth{{"focus_day", format_day(focus)},
             {"focus_user", focus_user},
             {"focus_alerts", focus_count},
             {"focus_alerts_hours_14_15", focus_hour_count},
             {"policy_id", policy_ids::kScript},
             {"application", app},
             {"seed_resource", seed_resource},
             {"window", range_json(window_start, focus + 1)},
             {"users", all_users},
             {"user_count", all_users.size()},
             {"exact_seed_users", exact_users},
             {"alerts", alerts.size()}};
  merge_alerts(corpus, std::move(alerts));
  return truth;
}

Json usb_guid_share(ScenarioContext& ctx, Corpus& corpus) {
  const DayIndex focus = ctx.day("focus_day", ctx.last_day());
  const DayIndex b_day = ctx.day("second_user_day", std::max(ctx.first_day(), focus - 320));
  const DayIndex c_day = ctx.day("third_user_day", std::max(ctx.first_day(), focus - 145));
  const std::string user = ctx.get<std::string>("user", std::string(kWatchlistUser));

  auto& rng = ctx.rng();
  const auto picked = ctx.sample_users(2);
  const std::string b_user = ctx.get<std::string>("second_user", ctx.base_user(picked[0]));
  const std::string c_user = ctx.get<std::string>("third_user", ctx.base_user(picked[1]));
  const std::string b_endpoint = "ws-" + b_user;
  const std::string c_endpoint = "ws-" + c_user;

  std::vector<std::string> g;
  for (int i = 0; i < 5; ++i) g.push_back(detail::random_guid(rng));
  auto descriptor = [](const std::string& vendor, const std::string& a, const std::string& b) {
    return "USBSTOR\\Disk&Ven_" + vendor + "\\{" + a + "}\\{" + b + "}";
  };
  const std::vector<std::string> own{descriptor("Kingston&Prod_DataTraveler", g[0], g[1]),
                                     descriptor("Kingston&Prod_DataTraveler", g[1], g[2]),
                                     descriptor("Kingston&Prod_DataTraveler", g[0], g[2])};
  const std::string b_descriptor = descriptor("Generic&Prod_Flash_Disk", g[0], g[3]);
  const std::string c_descriptor = descriptor("Lexar&Prod_JumpDrive", g[1], g[4]);

  std::vector<Event> events;
  const Timestamp focus_times[] = {10 * kHour + 5 * 60, 11 * kHour + 40 * 60, 15 * kHour + 20 * 60};
  for (int i = 0; i < 3; ++i) {
    detail::emit_run(rng,
                     single(user, "ws-poi", "explorer.exe", ResourceType::kUsbDevice, Activity::kMount, own[static_cast<std::size_t>(i)]),
                     day_start(focus) + focus_times[i], events);
  }
  detail::emit_run(rng, single(b_user, b_endpoint, "explorer.exe", ResourceType::kUsbDevice, Activity::kMount, b_descriptor),
                   day_start(b_day) + 9 * kHour + 30 * 60, events);
  detail::emit_run(rng, single(b_user, b_endpoint, "explorer.exe", ResourceType::kUsbDevice, Activity::kMount, b_descriptor),
                   day_start(b_day) + 13 * kHour + 10 * 60, events);
  detail::emit_run(rng, single(c_user, c_endpoint, "explorer.exe", ResourceType::kUsbDevice, Activity::kMount, c_descriptor),
                   day_start(c_day) + 11 * kHour, events);

  auto alerts = detect(events, corpus, ctx.kind());
  std::size_t top = 0;
  for (const auto& a : alerts) top += a.policy_id == policy_ids::kWatchlistUsb ? 1 : 0;
  Json truth{{"focus_day", format_day(focus)},
             {"user", user},
             {"descriptors", own},
             {"guids", std::vector<std::string>(g.begin(), g.begin() + 3)},
             {"seed_resource", own[0]},
             {"other_users", std::set<std::string>{b_user, c_user}},
             {"other_descriptors", {b_descriptor, c_descriptor}},
             {"top_policy_id", policy_ids::kWatchlistUsb},
             {"top_policy_alerts", top},
             {"alerts", alerts.size()}};
  merge_alerts(corpus, std::move(alerts));
  return truth;
}

Json autosave_file(ScenarioContext& ctx, Corpus& corpus) {
  const DayIndex peak = ctx.day("peak_day", std::max(ctx.first_day() + 5, ctx.last_day() - 42));
  const int peak_count = ctx.get<int>("peak_count", 265);
  const auto before = ctx.get<std::vector<int>>("hump_before", {12, 35, 60, 8, 15});
  const auto after = ctx.get<std::vector<int>>("hump_after", {90, 20});
  const double baseline_probability = ctx.get<double>("baseline_probability", 0.25);
  const std::string user = ctx.get<std::string>("user", "s-autosave");
  const DayIndex hump_first = peak - static_cast<DayIndex>(before.size());
  const DayIndex hump_last = peak + static_cast<DayIndex>(after.size());
  ctx.check_day(hump_first, "hump start");
  ctx.check_day(hump_last, "hump end");
  if (peak_count < 1) throw Error(ErrorCode::kConfig, "autosave_file: peak_count must be positive");

  const std::string endpoint = "ws-autosave";
  const std::string file = "C:/Users/" + user + "/Documents/Board Review Q1.pptx";
  const std::string odd = "C:/Users/" + user + "/Documents/Budget 2021.xlsx";

  auto& rng = ctx.rng();
  std::vector<Event> events;
  std::vector<Placed> placed;
  std::map<DayIndex, int> hump;
  for (DayIndex d = hump_first; d <= hump_last; ++d) {
    const int n = d < peak ? before[static_cast<std::size_t>(d - hump_first)]
                  : d == peak ? peak_count
                              : after[static_cast<std::size_t>(d - peak - 1)];
    hump[d] = n;
    for (int i = 0; i < n; ++i) {
      const bool is_odd = d == peak && i == 0;
      placed.push_back({d, single(user, endpoint, "onedrive.exe", ResourceType::kFile, Activity::kUpdate, is_odd ? odd : file)});
    }
  }
  // 08:30 to 15:00
  place(rng, placed, 8 * kHour + 30 * 60, 15 * kHour, events);

  std::bernoulli_distribution active(baseline_probability);
  std::uniform_int_distribution<int> per_day(1, 2);
  std::uniform_int_distribution<int> kind(0, 2);
  for (DayIndex d = ctx.first_day(); d <= ctx.last_day(); ++d) {
    if (d >= hump_first && d <= hump_last) continue;
    if (!active(rng)) continue;
    const int n = per_day(rng);
    for (int i = 0; i < n; ++i) {
      if (kind(rng) == 0) {
        placed.push_back({d, single(user, endpoint, "explorer.exe", ResourceType::kFile, Activity::kDelete,
                                    "C:/Users/" + user + "/Documents/old_notes_" + std::to_string(d % 97) + ".docx")});
      } else {
        placed.push_back({d, single(user, endpoint, "onedrive.exe", ResourceType::kFile, Activity::kUpdate,
                                    doc_path(rng, user))});
      }
    }
  }
  place(rng, placed, 9 * kHour, 17 * kHour, events);

  auto alerts = detect(events, corpus, ctx.kind());
  Json hump_json = Json::object();
  for (const auto& [d, n] : hump) hump_json[format_day(d)] = n;
  Json truth{{"user", user},
             {"peak_day", format_day(peak)},
             {"peak_count", peak_count},
             {"hump", hump_json},
             {"hump_range", range_json(hump_first, hump_last + 1)},
             {"baseline_max_per_day", 2},
             {"file", file},
             {"odd_resource", odd},
             {"policy_id", policy_ids::kCloud},
             {"alerts", alerts.size()}};
  merge_alerts(corpus, std::move(alerts));
  return truth;
}

}  // namespace

Corpus inject_scenario(Corpus corpus, const ScenarioSpec& scenario) {
  ScenarioContext ctx(corpus, scenario);
  Json truth;
  switch (scenario.kind) {
    case ScenarioKind::kSetupSpike: truth = setup_spike(ctx, corpus); break;
    case ScenarioKind::kPolicySpikeWeek: truth = policy_spike_week(ctx, corpus); break;
    case ScenarioKind::kPseudoAccountFlood: truth = pseudo_account_flood(ctx, corpus); break;
    case ScenarioKind::kGiantAlerts: truth = giant_alerts(ctx, corpus); break;
    case ScenarioKind::kWscriptBurst: truth = wscript_burst(ctx, corpus); break;
    case ScenarioKind::kUsbGuidShare: truth = usb_guid_share(ctx, corpus); break;
    case ScenarioKind::kAutosaveFile: truth = autosave_file(ctx, corpus); break;
  }
  corpus.manifest["scenarios"].push_back(
      Json{{"kind", to_string(scenario.kind)}, {"params", ctx.resolved()}, {"truth", std::move(truth)}});
  corpus.manifest["total_alerts"] = corpus.alerts.size();
  return corpus;
}

}  // namespace alertlens::synth
