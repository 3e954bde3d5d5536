#pragma once

// Helpers shared by the base generator and the scenario injectors.

#include <random>
#include <span>
#include <string>
#include <vector>

#include "alertlens/core/model.hpp"

namespace alertlens::synth::detail {

using Rng = std::mt19937_64;

// Events of one planned run share user, endpoint and application and start
// within the bundling gap of each other, so the policy engine folds them
// into a single alert.
struct RunPlan {
  std::string user;
  std::string endpoint;
  std::string application;
  ResourceType resource_type = ResourceType::kFile;
  Activity activity = Activity::kRead;
  std::vector<std::string> resources;  // one per event
  std::vector<Timestamp> offsets;      // per event, offsets[0] == 0, non-decreasing

  Timestamp span() const { return offsets.empty() ? 0 : offsets.back(); }
};

inline constexpr Timestamp kGeneratorGap = 60;

// Events-per-alert: 1 + Geometric(p), capped at the per-alert limit.
int draw_event_count(Rng& rng, double single_event_fraction);

// Intra-run offsets, each step 1..15 seconds.
std::vector<Timestamp> draw_offsets(Rng& rng, int count);

// Places runs inside [begin, end) so that consecutive runs start more than
// the bundling gap after the previous run's last event. Returns one start
// per run, in input order. Throws Error(kConfig) if they cannot fit.
std::vector<Timestamp> layout_runs(Rng& rng, Timestamp begin, Timestamp end, std::span<const RunPlan> runs);

// Appends the run's events; event ids are assigned later by assign_event_ids.
void emit_run(Rng& rng, const RunPlan& run, Timestamp start, std::vector<Event>& out);

// Sorts by (start_time, user, application, resource) and assigns
// prefix + zero-padded sequence ids.
void assign_event_ids(std::vector<Event>& events, const std::string& prefix);

std::string random_guid(Rng& rng);

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& options) {
  std::uniform_int_distribution<std::size_t> d(0, options.size() - 1);
  return options[d(rng)];
}

std::uint64_t stream_seed(std::uint64_t seed, std::string_view salt);

// Zero-padded id such as "u00042"; width grows with the user count.
std::string padded_id(std::string_view prefix, std::size_t n, std::size_t user_count);

// Distinct events across alerts ordered by (start_time, event_id).
std::vector<const Event*> unique_events(std::span<const Alert> alerts);

}  // namespace alertlens::synth::detail
