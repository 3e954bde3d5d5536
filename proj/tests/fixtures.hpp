#pragma once

#include <random>
#include <string>
#include <vector>

#include "alertlens/core/model.hpp"
#include "alertlens/policy/engine.hpp"
#include "alertlens/synth/default_policies.hpp"
#include "alertlens/synth/generator.hpp"

namespace alertlens::testing {

inline Event make_event(std::string id, std::string user, Timestamp t, std::string resource = "C:/data/a.txt",
                        std::string app = "app.exe", std::string endpoint = "") {
  Event e;
  e.event_id = std::move(id);
  e.endpoint = endpoint.empty() ? "ws-" + user : std::move(endpoint);
  e.user = std::move(user);
  e.application = std::move(app);
  e.resource = std::move(resource);
  e.resource_type = ResourceType::kFile;
  e.activity = Activity::kRead;
  e.start_time = t;
  e.end_time = t + 1;
  return e;
}

// Single-event alert.
inline Alert make_alert(std::string id, Timestamp t, std::string user, std::string policy = "P1", int severity = 1,
                        std::string resource = "C:/data/a.txt") {
  Alert a;
  a.alert_id = std::move(id);
  a.alert_time = t;
  a.policy_id = std::move(policy);
  a.severity = severity;
  a.events.push_back(make_event(a.alert_id + "-e0", std::move(user), t, std::move(resource)));
  return a;
}

inline const Timestamp kDay0 = day_start(make_day(2021, 3, 1));  // a Monday

// Random alerts over `days` days for oracle comparisons: few users, policies
// and resources so that groups collide, plus multi-event alerts with mixed
// resources and USB descriptors sharing GUIDs.
inline std::vector<Alert> random_alerts(std::uint64_t seed, std::size_t n, int days = 21) {
  std::mt19937_64 rng(seed);
  const std::vector<std::string> policies{"P-A", "P-B", "P-C", "P-D", "P-E"};
  const std::vector<int> severities{5, 3, 3, 2, 1};
  const std::vector<std::string> resources{
      "C:/Users/x/Documents/report.docx",
      "D:/share/REPORT.docx",
      "C:/Windows/System32/wscript.exe",
      "C:\\Windows\\SysWOW64\\wscript.exe",
      "USBSTOR\\Disk\\{11111111-2222-3333-4444-555555555555}\\{aaaaaaaa-bbbb-cccc-dddd-eeeeeeeeeeee}",
      "USBSTOR\\Disk\\{aaaaaaaa-bbbb-cccc-dddd-eeeeeeeeeeee}\\{99999999-8888-7777-6666-555555555555}",
      "printer-7",
      "C:/tmp/notes.txt",
  };
  std::uniform_int_distribution<int> user_d(0, 24), pol_d(0, 4), res_d(0, static_cast<int>(resources.size()) - 1);
  std::uniform_int_distribution<Timestamp> t_d(0, days * kSecondsPerDay - 1);
  std::uniform_int_distribution<int> extra_d(0, 3);
  std::vector<Alert> out;
  for (std::size_t i = 0; i < n; ++i) {
    const int p = pol_d(rng);
    const std::string user = "user" + std::to_string(user_d(rng));
    const Timestamp t = kDay0 + t_d(rng);
    Alert a = make_alert("a" + std::to_string(seed) + "-" + std::to_string(i), t, user, policies[p], severities[p],
                         resources[res_d(rng)]);
    const int extra = extra_d(rng) == 0 ? 2 : 0;
    for (int k = 0; k < extra; ++k) {
      a.events.push_back(make_event(a.alert_id + "-e" + std::to_string(k + 1), user, t + 5 * (k + 1), resources[res_d(rng)]));
    }
    out.push_back(std::move(a));
  }
  return out;
}

// Small corpus with every scenario injected at reduced volume.
inline synth::Corpus scenario_corpus(std::uint64_t seed = 7) {
  synth::GeneratorConfig c;
  c.user_count = 400;
  c.target_alerts = 24000;
  c.noise_reserve = 0;
  c.seed = seed;
  synth::Corpus corpus = synth::generate(c, synth::default_policies());
  for (auto kind : synth::all_scenarios()) {
    Json params = Json::object();
    if (kind == synth::ScenarioKind::kSetupSpike) params = {{"count", 1500}};
    if (kind == synth::ScenarioKind::kPseudoAccountFlood) params = {{"count", 3000}};
    corpus = synth::inject_scenario(std::move(corpus), {kind, params});
  }
  return corpus;
}

inline const Json& scenario_truth(const synth::Corpus& corpus, std::string_view kind) {
  for (const auto& s : corpus.manifest.at("scenarios")) {
    if (s.at("kind") == kind) return s.at("truth");
  }
  static const Json kMissing;
  return kMissing;
}

}  // namespace alertlens::testing
