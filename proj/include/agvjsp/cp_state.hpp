#pragma once

// Domains and propagation for the constraint-based solver.
//
// Every activity has a start-time interval [est, lst]. Three families of
// constraints shrink those intervals:
//   * difference constraints s_after >= s_before + delay (job chains),
//   * unary resources (machines, and AGVs whose transports are known),
//     checked pairwise: an order that cannot fit is excluded and the other
//     one committed,
//   * committed AGV sequences, enforced through per-location virtual tasks.
//
// A transport t(P,Q) and a location L give the virtual task
//   s'^L = s + d(P, L),   e'^L = e + d(Q, L).
// Ordering two transports of one AGV so that e'_i^L <= s'_j^L for every L is
// the same as e_i + d(Q_i, P_j) <= s_j whenever d obeys the triangle
// inequality.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "agvjsp/core.hpp"

namespace agvjsp::cp {

enum class ActivityKind { processing, transport };

struct ActivityVar {
  Time est = 0;
  Time lst = 0;
  Time duration = 0;
  ActivityKind kind = ActivityKind::processing;
  int resource = -1;  // machine id, or AGV id once known
  int from = -1;      // transports only
  int to = -1;
  int job = -1;
  int chain_index = -1;

  bool fixed() const { return est == lst; }
  bool empty() const { return est > lst; }
  Time ect() const { return est + duration; }
  Time lct() const { return lst + duration; }
};

struct VirtualTask {
  int base = -1;  // transport activity id
  int location = -1;
  Time start_offset = 0;  // d(P, L)
  Time end_offset = 0;    // d(Q, L)

  Time start(const ActivityVar& t) const { return t.est + start_offset; }
  Time end(const ActivityVar& t) const { return t.est + t.duration + end_offset; }
  Time duration(const ActivityVar& t) const { return t.duration + end_offset - start_offset; }
};

/// One virtual task per (transport, location), grouped by location.
inline std::vector<std::vector<VirtualTask>> build_virtual_tasks(const std::vector<ActivityVar>& activities,
                                                                 const DistanceMatrix& d) {
  const int L = static_cast<int>(d.size());
  std::vector<std::vector<VirtualTask>> out(L);
  for (int i = 0; i < static_cast<int>(activities.size()); ++i) {
    const auto& a = activities[i];
    if (a.kind != ActivityKind::transport) continue;
    for (int l = 0; l < L; ++l) out[l].push_back({i, l, d(a.from, l), d(a.to, l)});
  }
  return out;
}

/// Transport i then transport j on one AGV: e_i + d(Q_i, P_j) <= s_j, at the
/// start times the two activities currently hold.
inline bool transition_feasible(const ActivityVar& i, const ActivityVar& j, const DistanceMatrix& d) {
  return i.est + i.duration + d(i.to, j.from) <= j.est;
}

/// The same order read through virtual tasks: i's shadow ends before j's
/// shadow starts at every location.
inline bool virtual_tasks_ordered(const ActivityVar& i, const ActivityVar& j, const DistanceMatrix& d) {
  for (int l = 0; l < static_cast<int>(d.size()); ++l) {
    const VirtualTask vi{-1, l, d(i.from, l), d(i.to, l)};
    const VirtualTask vj{-1, l, d(j.from, l), d(j.to, l)};
    if (vi.end(i) > vj.start(j)) return false;
  }
  return true;
}

struct Precedence {
  int before = -1;
  int after = -1;
  Time delay = 0;  // s_after >= s_before + delay
};

struct UnaryGroup {
  std::vector<int> members;
  bool transitions = false;  // AGV: empty travel between consecutive transports
};

class SearchState {
 public:
  SearchState() = default;
  explicit SearchState(const DistanceMatrix& d, int agv_count = 1)
      : agv_sequences(agv_count), distances_(&d) {
    // Per-location virtual tasks collapse to a (drop-off, pickup) gap table:
    // gap(Q, P) = max over L of d(Q, L) - d(P, L).
    const int L = static_cast<int>(d.size());
    gap_.assign(static_cast<std::size_t>(L) * L, 0);
    for (int q = 0; q < L; ++q)
      for (int p = 0; p < L; ++p) {
        Time g = std::numeric_limits<Time>::min();
        for (int l = 0; l < L; ++l) g = std::max(g, d(q, l) - d(p, l));
        gap_[static_cast<std::size_t>(q) * L + p] = g;
      }
  }

  std::vector<ActivityVar> activities;
  std::vector<Precedence> precedences;
  std::vector<std::vector<int>> agv_sequences;
  std::vector<UnaryGroup> groups;
  std::optional<int> agv_home;  // location every AGV leaves from at time 0

  int add_activity(const ActivityVar& a) {
    activities.push_back(a);
    const std::size_t n = activities.size();
    std::vector<std::int8_t> grown(n * n, 0);
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = 0; j + 1 < n; ++j) grown[i * n + j] = order_[i * (n - 1) + j];
    order_ = std::move(grown);
    return static_cast<int>(n - 1);
  }

  void add_precedence(int before, int after, Time delay) { precedences.push_back({before, after, delay}); }
  void add_group(std::vector<int> members, bool transitions) { groups.push_back({std::move(members), transitions}); }
  void commit_agv(int agv, int activity) {
    activities[activity].resource = agv;
    agv_sequences[agv].push_back(activity);
  }

  bool ordered(int i, int j) const { return order_[static_cast<std::size_t>(i) * activities.size() + j] != 0; }
  void set_order(int i, int j) { order_[static_cast<std::size_t>(i) * activities.size() + j] = 1; }

  /// Empty travel needed between transports i and j when i runs first.
  Time transition(int i, int j) const {
    const auto& a = activities[i];
    const auto& b = activities[j];
    return gap_[static_cast<std::size_t>(a.to) * distances_->size() + b.from];
  }

  const DistanceMatrix& distances() const { return *distances_; }

  /// Clamp every activity so it ends no later than `horizon`.
  bool cap(Time horizon) {
    for (auto& a : activities) {
      a.lst = std::min(a.lst, horizon - a.duration);
      if (a.empty()) return false;
    }
    return true;
  }

 private:
  const DistanceMatrix* distances_ = nullptr;
  std::vector<Time> gap_;
  std::vector<std::int8_t> order_;
};

namespace detail {

inline bool raise_est(ActivityVar& a, Time v, bool& changed) {
  if (v > a.est) {
    a.est = v;
    changed = true;
  }
  return !a.empty();
}

inline bool lower_lst(ActivityVar& a, Time v, bool& changed) {
  if (v < a.lst) {
    a.lst = v;
    changed = true;
  }
  return !a.empty();
}

/// i before j with separation `sep` (duration plus any empty travel).
inline bool enforce_order(std::vector<ActivityVar>& acts, int i, int j, Time sep, bool& changed) {
  return raise_est(acts[j], acts[i].est + sep, changed) && lower_lst(acts[i], acts[j].lst - sep, changed);
}

}  // namespace detail

/// Shrinks domains to a fixpoint. Returns false when some domain empties or a
/// resource pair admits neither order; the state is then a dead branch.
inline bool propagate(SearchState& s) {
  auto& acts = s.activities;
  for (const auto& a : acts)
    if (a.empty()) return false;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& p : s.precedences)
      if (!detail::raise_est(acts[p.after], acts[p.before].est + p.delay, changed)) return false;
    for (auto it = s.precedences.rbegin(); it != s.precedences.rend(); ++it)
      if (!detail::lower_lst(acts[it->before], acts[it->after].lst - it->delay, changed)) return false;

    for (const auto& seq : s.agv_sequences) {
      if (seq.empty()) continue;
      if (s.agv_home && !detail::raise_est(acts[seq.front()], s.distances()(*s.agv_home, acts[seq.front()].from), changed))
        return false;
      for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
        const int i = seq[k], j = seq[k + 1];
        if (!detail::enforce_order(acts, i, j, acts[i].duration + s.transition(i, j), changed)) return false;
      }
    }

    for (const auto& g : s.groups) {
      const auto& m = g.members;
      for (std::size_t x = 0; x < m.size(); ++x)
        for (std::size_t y = x + 1; y < m.size(); ++y) {
          const int i = m[x], j = m[y];
          const Time sep_ij = acts[i].duration + (g.transitions ? s.transition(i, j) : 0);
          const Time sep_ji = acts[j].duration + (g.transitions ? s.transition(j, i) : 0);
          if (s.ordered(i, j)) {
            if (!detail::enforce_order(acts, i, j, sep_ij, changed)) return false;
            continue;
          }
          if (s.ordered(j, i)) {
            if (!detail::enforce_order(acts, j, i, sep_ji, changed)) return false;
            continue;
          }
          const bool ij = acts[i].est + sep_ij <= acts[j].lst;
          const bool ji = acts[j].est + sep_ji <= acts[i].lst;
          if (!ij && !ji) return false;
          if (!ij) {
            s.set_order(j, i);
            changed = true;
          } else if (!ji) {
            s.set_order(i, j);
            changed = true;
          }
        }
    }
  }
  return true;
}

/// Preemptive relaxation of one unary resource: earliest-deadline-first with
/// releases est and deadlines lct. Returns false when some deadline is missed.
inline bool preemptive_feasible(const std::vector<ActivityVar>& acts, const std::vector<int>& members) {
  std::vector<int> order = members;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return acts[a].est < acts[b].est; });
  using Item = std::pair<Time, Time>;  // deadline, remaining
  std::priority_queue<Item, std::vector<Item>, std::greater<>> ready;
  Time now = 0;
  std::size_t k = 0;
  while (k < order.size() || !ready.empty()) {
    if (ready.empty()) now = std::max(now, acts[order[k]].est);
    while (k < order.size() && acts[order[k]].est <= now) {
      ready.push({acts[order[k]].lct(), acts[order[k]].duration});
      ++k;
    }
    auto [deadline, remaining] = ready.top();
    ready.pop();
    const Time next_release = k < order.size() ? acts[order[k]].est : std::numeric_limits<Time>::max();
    const Time run = std::min(remaining, next_release - now);
    now += run;
    remaining -= run;
    if (remaining > 0)
      ready.push({deadline, remaining});
    else if (now > deadline)
      return false;
  }
  return true;
}

}  // namespace agvjsp::cp
