#pragma once

// Data-parallel scans over an AlertTable. Each kernel splits the candidate
// range across OpenMP threads, accumulates thread-local results and reduces
// them in a fixed order, so results do not depend on the thread count.

#include <cstdint>
#include <limits>
#include <vector>

#include "alertlens/store/store.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace alertlens::kernels {

// Selector lowered to id-space lookups.
struct CompiledSelector {
  Timestamp start = 0;
  Timestamp end = 0;
  std::vector<std::uint8_t> user_ok;      // empty = any
  std::vector<std::uint8_t> policy_ok;    // empty = any
  std::vector<std::uint8_t> resource_ok;  // empty = any
  int hour = -1;
  bool empty = false;  // provably matches nothing

  // Candidates are either [lo, hi) or an explicit ascending list.
  bool use_list = false;
  AlertIndex lo = 0;
  AlertIndex hi = 0;
  std::vector<AlertIndex> list;

  std::size_t candidate_count() const { return use_list ? list.size() : hi - lo; }
  AlertIndex candidate(std::size_t k) const { return use_list ? list[k] : lo + static_cast<AlertIndex>(k); }
};

CompiledSelector compile(const AlertTable& t, const Selector& s);

inline bool matches(const AlertTable& t, const CompiledSelector& c, AlertIndex i) {
  if (t.time[i] < c.start || t.time[i] >= c.end) return false;
  if (!c.user_ok.empty() && !c.user_ok[t.user[i]]) return false;
  if (!c.policy_ok.empty() && !c.policy_ok[t.policy[i]]) return false;
  if (c.hour >= 0 && t.hour[i] != c.hour) return false;
  if (!c.resource_ok.empty()) {
    for (ResourceId r : t.resources_of(i)) {
      if (c.resource_ok[r]) return true;
    }
    return false;
  }
  return true;
}

void set_threads(int n);  // 0 restores the OpenMP default
int max_threads();

std::vector<std::uint8_t> exclusion_mask(const AlertTable& t, const ExclusionSet& normalized);

// Visible matching indices, ascending.
std::vector<AlertIndex> select(const Snapshot& snap, const CompiledSelector& c);

inline constexpr std::size_t kSkip = std::numeric_limits<std::size_t>::max();

// Histogram over key(i) in [0, nkeys) for visible matches; kSkip drops.
template <typename KeyFn>
std::vector<std::size_t> count_by(const Snapshot& snap, const CompiledSelector& c, std::size_t nkeys, KeyFn key) {
  std::vector<std::size_t> total(nkeys, 0);
  if (c.empty) return total;
  const AlertTable& t = snap.t();
  const auto n = static_cast<std::int64_t>(c.candidate_count());
#pragma omp parallel
  {
    std::vector<std::size_t> local(nkeys, 0);
#pragma omp for schedule(static) nowait
    for (std::int64_t k = 0; k < n; ++k) {
      const AlertIndex i = c.candidate(static_cast<std::size_t>(k));
      if (!snap.visible(i) || !matches(t, c, i)) continue;
      const std::size_t b = key(i);
      if (b != kSkip) ++local[b];
    }
#pragma omp critical
    for (std::size_t b = 0; b < nkeys; ++b) total[b] += local[b];
  }
  return total;
}

// key(i) for every visible match, in candidate order.
template <typename T, typename KeyFn>
std::vector<T> map_select(const Snapshot& snap, const CompiledSelector& c, KeyFn key) {
  std::vector<T> out;
  if (c.empty) return out;
  const AlertTable& t = snap.t();
  const auto n = static_cast<std::int64_t>(c.candidate_count());
  std::vector<std::vector<T>> parts;
#pragma omp parallel
  {
    int tid = 0;
    int nthreads = 1;
#ifdef _OPENMP
    tid = omp_get_thread_num();
    nthreads = omp_get_num_threads();
#endif
#pragma omp single
    parts.resize(static_cast<std::size_t>(nthreads));
    std::vector<T> local;
#pragma omp for schedule(static)
    for (std::int64_t k = 0; k < n; ++k) {
      const AlertIndex i = c.candidate(static_cast<std::size_t>(k));
      if (snap.visible(i) && matches(t, c, i)) local.push_back(key(i));
    }
    parts[static_cast<std::size_t>(tid)] = std::move(local);
  }
  // static schedule hands out contiguous chunks in thread order
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace alertlens::kernels
