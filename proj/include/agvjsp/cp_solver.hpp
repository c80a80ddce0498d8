#pragma once

// Exact branch-and-bound solver.
//
// Search builds the schedule chronologically: each branch appends the next
// task of some job to a resource (a machine, or a chosen AGV) at the earliest
// start its job and resource allow. Only canonical append orders are
// explored: start times never decrease along a branch, and two tied tasks on
// unrelated jobs and resources are appended in id order. Every left-justified
// schedule has exactly such an order, so the search stays complete.
//
// Each node fixes the appended task, lifts every pending task to the current
// start time, and runs propagate() against the makespan target. Machine and
// single-AGV resources additionally get a preemptive deadline check; a fleet
// of several AGVs gets a work-per-vehicle bound.

#include <chrono>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "agvjsp/core.hpp"
#include "agvjsp/cp_state.hpp"

namespace agvjsp::cp {

struct Bounds {
  Time lower = 0;
  Time upper = 0;
  Time formula_upper = 0;  // processing + loaded transports + longest travel
  Time serial_makespan = 0;
};

/// lower = ceil(loaded transport time / B); upper = the larger of
/// (all task durations + longest travel) and the makespan of a serial
/// single-AGV schedule, so the upper bound is always attainable.
inline Bounds initial_bounds(const Instance& inst, const ModelOptions& opts = {}) {
  Bounds b;
  const Time loaded = loaded_transport_total(inst, opts);
  b.lower = (loaded + inst.agv_count - 1) / inst.agv_count;
  b.formula_upper = processing_total(inst) + loaded + inst.distances.max_entry();
  b.serial_makespan = serial_schedule(inst, opts).makespan;
  b.upper = std::max(b.formula_upper, b.serial_makespan);
  return b;
}

enum class BoundingMode { monotonous, dichotomous };

inline std::string to_string(BoundingMode m) { return m == BoundingMode::monotonous ? "monotonous" : "dichotomous"; }

/// Per-transport AGV choice, indexed [job][transition].
using AgvAssignment = std::vector<std::vector<int>>;

struct SolveOptions {
  BoundingMode mode = BoundingMode::dichotomous;
  ModelOptions model;
  std::optional<AgvAssignment> assignment;
  /// Enumerate AGV assignments up front (restricted-growth order, first
  /// transport on AGV 0) and solve each with the assignment fixed.
  bool enumerate_assignments = false;
  std::int64_t node_budget = 0;  // 0 = unlimited
  std::int64_t time_budget_ms = 0;
  std::function<void(const Schedule&)> on_incumbent;
};

struct SolveStats {
  std::int64_t nodes = 0;
  std::int64_t backtracks = 0;
  std::int64_t nodes_to_incumbent = 0;
  double time_to_incumbent_ms = 0;
  double time_total_ms = 0;
  int assignments_tried = 0;
};

struct SolveResult {
  Schedule schedule;
  bool optimal = false;
  Time lower_bound = 0;
  SolveStats stats;
  std::vector<Time> incumbents;                        // makespans in discovery order
  std::vector<std::pair<Time, Time>> intervals;        // [lb, ub] after every dichotomous probe
};

namespace detail {

class Search {
 public:
  Search(const Instance& inst, const SolveOptions& opts) : inst_(inst), opts_(opts), start_(Clock::now()) {
    build_model();
  }

  SolveResult run(std::optional<Time> external_upper = std::nullopt) {
    SolveResult res;
    const Bounds b = initial_bounds(inst_, opts_.model);
    Time lb = b.lower;
    for (int j = 0; j < static_cast<int>(inst_.jobs.size()); ++j) lb = std::max(lb, chain_length(inst_, j, opts_.model));

    // Starting incumbent: best of the serial and greedy list schedules,
    // unless an assignment is fixed and those violate it.
    std::optional<Schedule> incumbent;
    if (opts_.assignment) {
      incumbent = serial_schedule_for(*opts_.assignment);
    } else {
      for (const auto& s : {serial_schedule(inst_, opts_.model), greedy_schedule(inst_, opts_.model)})
        if (!incumbent || s.makespan < incumbent->makespan) incumbent = s;
    }
    Time ub = incumbent->makespan;
    if (external_upper) ub = std::min(ub, *external_upper);
    if (incumbent && incumbent->makespan > ub) incumbent.reset();
    auto take = [&](const Schedule& s) {
      incumbent = s;
      res.incumbents.push_back(s.makespan);
      stats_.nodes_to_incumbent = stats_.nodes;
      stats_.time_to_incumbent_ms = elapsed_ms();
      if (opts_.on_incumbent) opts_.on_incumbent(s);
    };
    if (incumbent) res.incumbents.push_back(incumbent->makespan);

    bool complete = true;
    if (opts_.mode == BoundingMode::monotonous) {
      target_ = ub - 1;
      if (target_ >= lb) {
        on_solution_ = [&](const Schedule& s) {
          take(s);
          target_ = s.makespan - 1;
          return target_ < lb;  // nothing better can exist
        };
        complete = dfs_root();
      }
      res.lower_bound = complete ? (incumbent ? incumbent->makespan : ub) : lb;
      res.optimal = complete && incumbent.has_value();
    } else {
      res.intervals.push_back({lb, ub});
      while (lb < ub) {
        const Time mid = lb + (ub - lb) / 2;
        target_ = mid;
        bool found = false;
        on_solution_ = [&](const Schedule& s) {
          take(s);
          found = true;
          return true;
        };
        const bool finished = dfs_root();
        if (found)
          ub = incumbent->makespan;
        else if (finished)
          lb = mid + 1;
        else {
          complete = false;
          break;
        }
        res.intervals.push_back({lb, ub});
      }
      res.lower_bound = lb;
      res.optimal = complete && incumbent.has_value() && lb >= ub;
    }
    if (incumbent) res.schedule = *incumbent;
    stats_.time_total_ms = elapsed_ms();
    res.stats = stats_;
    res.stats.assignments_tried = 1;
    has_solution_ = incumbent.has_value();
    return res;
  }

  bool found_solution() const { return has_solution_; }
  bool aborted() const { return aborted_; }

 private:
  using Clock = std::chrono::steady_clock;

  struct Node {
    SearchState state;
    std::vector<int> next;
    std::vector<int> machine_last;
    std::vector<int> agv_last;
    int last = -1;
    Time last_start = 0;
    int appended = 0;
  };

  Schedule serial_schedule_for(const AgvAssignment& assignment) const {
    ScheduleBuilder b(inst_, opts_.model);
    for (int j = 0; j < static_cast<int>(inst_.jobs.size()); ++j)
      while (!b.job_done(j)) {
        const auto& c = b.next_task(j);
        b.append(j, c.transport ? assignment.at(j).at(c.position) : 0);
      }
    return b.schedule();
  }

  double elapsed_ms() const { return std::chrono::duration<double, std::milli>(Clock::now() - start_).count(); }

  int activity_id(int job, int index) const { return offset_[job] + index; }

  void build_model() {
    const int N = static_cast<int>(inst_.jobs.size());
    const int B = inst_.agv_count;
    base_ = SearchState(inst_.distances, B);
    if (opts_.model.agv_initial_at_start) base_.agv_home = inst_.start_location;
    std::vector<std::vector<int>> per_machine(inst_.machines), per_agv(B);
    for (int j = 0; j < N; ++j) {
      offset_.push_back(static_cast<int>(base_.activities.size()));
      const auto chain = job_chain(inst_, j, opts_.model);
      chain_len_.push_back(static_cast<int>(chain.size()));
      for (int k = 0; k < static_cast<int>(chain.size()); ++k) {
        const auto& c = chain[k];
        ActivityVar a;
        a.est = 0;
        a.lst = std::numeric_limits<Time>::max() / 4;
        a.duration = c.duration;
        a.job = j;
        a.chain_index = k;
        if (c.transport) {
          a.kind = ActivityKind::transport;
          a.from = c.from;
          a.to = c.to;
          if (opts_.assignment) a.resource = opts_.assignment->at(j).at(c.position);
          else if (B == 1) a.resource = 0;
        } else {
          a.kind = ActivityKind::processing;
          a.resource = c.machine;
        }
        const int id = base_.add_activity(a);
        if (c.transport) {
          if (a.resource >= 0) per_agv[a.resource].push_back(id);
        } else {
          per_machine[c.machine].push_back(id);
        }
        if (k > 0) base_.add_precedence(id - 1, id, base_.activities[id - 1].duration);
      }
    }
    total_ = static_cast<int>(base_.activities.size());
    for (auto& m : per_machine)
      if (!m.empty()) {
        group_of_.resize(total_, -1);
        for (int id : m) group_of_[id] = static_cast<int>(base_.groups.size());
        base_.add_group(m, false);
      }
    group_of_.resize(total_, -1);
    for (auto& a : per_agv)
      if (!a.empty()) {
        for (int id : a) group_of_[id] = static_cast<int>(base_.groups.size());
        base_.add_group(a, true);
      }
    pooled_agvs_ = B > 1 && !opts_.assignment;
  }

  bool out_of_budget() {
    if (aborted_) return true;
    if (opts_.node_budget > 0 && stats_.nodes >= opts_.node_budget) aborted_ = true;
    if (opts_.time_budget_ms > 0 && (stats_.nodes & 255) == 0 && elapsed_ms() >= static_cast<double>(opts_.time_budget_ms))
      aborted_ = true;
    return aborted_;
  }

  /// Returns false if the search was cut short by the budget.
  bool dfs_root() {
    Node root;
    root.state = base_;
    root.next.assign(inst_.jobs.size(), 0);
    root.machine_last.assign(inst_.machines, -1);
    root.agv_last.assign(inst_.agv_count, -1);
    stop_ = false;
    if (!root.state.cap(target_) || !propagate(root.state) || !bounds_ok(root)) return !aborted_;
    dfs(root);
    return !aborted_;
  }

  bool independent(int a, int b, int resource_a) const {
    const auto& x = base_.activities[a];
    const auto& y = base_.activities[b];
    if (x.job == y.job) return false;
    if (x.kind != y.kind) return true;
    if (x.kind == ActivityKind::transport) return false;  // AGVs are treated as one resource class here
    return resource_a != y.resource;
  }

  Schedule extract(const Node& n) const {
    Schedule s;
    for (const auto& a : n.state.activities) {
      if (a.kind == ActivityKind::processing)
        s.machine_tasks.push_back({a.job, position_of(a), a.resource, a.est, a.est + a.duration});
      else
        s.transport_tasks.push_back({a.from, a.to, TransportPayload{a.job, position_of(a)}, a.resource, a.est, a.est + a.duration});
    }
    s.makespan = makespan(s);
    return s;
  }

  int position_of(const ActivityVar& a) const {
    // chain index -> operation position / transition index
    const bool legs = opts_.model.start_target_transports;
    if (a.kind == ActivityKind::processing) return legs ? (a.chain_index - 1) / 2 : a.chain_index / 2;
    return legs ? a.chain_index / 2 : (a.chain_index + 1) / 2;
  }

  bool bounds_ok(const Node& n) const {
    const auto& acts = n.state.activities;
    for (const auto& g : n.state.groups) {
      std::vector<int> pending;
      for (int id : g.members)
        if (!is_appended(n, id)) pending.push_back(id);
      if (pending.size() > 1 && !preemptive_feasible(acts, pending)) return false;
    }
    if (pooled_agvs_) {
      const int B = inst_.agv_count;
      Time work = 0;
      for (int id = 0; id < total_; ++id)
        if (acts[id].kind == ActivityKind::transport && !is_appended(n, id)) work += acts[id].duration;
      if (work > 0) {
        Time sum = work;
        for (int b = 0; b < B; ++b) {
          const Time avail = n.agv_last[b] < 0 ? 0 : acts[n.agv_last[b]].ect();
          sum += std::max(avail, n.last_start);
        }
        if (sum > static_cast<Time>(B) * target_) return false;
      }
    }
    return true;
  }

  void dfs(Node& node) {
    if (stop_ || out_of_budget()) return;
    ++stats_.nodes;
    if (node.appended == total_) {
      if (on_solution_(extract(node))) stop_ = true;
      return;
    }

    struct Child {
      Time domain;
      int activity;
      int option;
    };
    std::vector<Child> children;
    const auto& acts = node.state.activities;
    for (int j = 0; j < static_cast<int>(node.next.size()); ++j) {
      if (node.next[j] >= chain_len_[j]) continue;
      const int c = activity_id(j, node.next[j]);
      const auto& a = acts[c];
      const Time dom = a.lst - a.est;
      if (a.kind == ActivityKind::processing || !pooled_agvs_) {
        children.push_back({dom, c, a.resource});
        continue;
      }
      for (int b = 0; b < inst_.agv_count; ++b) {
        bool symmetric = false;
        for (int b2 = 0; b2 < b && !symmetric; ++b2)
          symmetric = agv_end(node, b2) == agv_end(node, b) && agv_at(node, b2) == agv_at(node, b);
        if (!symmetric) children.push_back({dom, c, b});
      }
    }
    std::stable_sort(children.begin(), children.end(), [](const Child& x, const Child& y) {
      if (x.domain != y.domain) return x.domain < y.domain;
      if (x.activity != y.activity) return x.activity < y.activity;
      return x.option < y.option;
    });

    for (const auto& ch : children) {
      if (stop_ || aborted_) return;
      const int c = ch.activity;
      const auto& a = node.state.activities[c];
      const int j = a.job;
      const Time job_ready = node.next[j] == 0 ? 0 : node.state.activities[c - 1].ect();
      Time e = job_ready;
      if (a.kind == ActivityKind::processing) {
        const int prev = node.machine_last[a.resource];
        if (prev >= 0) e = std::max(e, node.state.activities[prev].ect());
      } else {
        const int at = agv_at(node, ch.option);
        e = std::max(e, agv_end(node, ch.option) + (at < 0 ? 0 : inst_.distances(at, a.from)));
      }
      if (e < node.last_start) continue;
      if (node.last >= 0 && e == node.last_start && c < node.last && independent(c, node.last, ch.option)) continue;
      if (e < a.est || e > a.lst || e + a.duration > target_) {
        ++stats_.backtracks;
        continue;
      }

      Node child = node;
      auto& cs = child.state;
      auto& ca = cs.activities[c];
      ca.est = ca.lst = e;
      if (a.kind == ActivityKind::processing) {
        child.machine_last[a.resource] = c;
      } else {
        cs.commit_agv(ch.option, c);
        child.agv_last[ch.option] = c;
      }
      if (group_of_[c] >= 0)
        for (int other : cs.groups[group_of_[c]].members)
          if (other != c && !is_appended(node, other)) cs.set_order(c, other);
      ++child.next[j];
      ++child.appended;
      child.last = c;
      child.last_start = e;

      bool ok = cs.cap(target_);
      for (int id = 0; ok && id < total_; ++id) {
        if (is_appended(child, id)) continue;
        auto& x = cs.activities[id];
        Time floor = e;
        if (x.kind == ActivityKind::transport && pooled_agvs_) {
          Time reach = std::numeric_limits<Time>::max();
          for (int b = 0; b < inst_.agv_count; ++b) {
            const int at = agv_at(child, b);
            reach = std::min(reach, agv_end(child, b) + (at < 0 ? 0 : inst_.distances(at, x.from)));
          }
          floor = std::max(floor, reach);
        }
        if (floor > x.est) x.est = floor;
        ok = !x.empty();
      }
      if (!ok || !propagate(cs) || !bounds_ok(child)) {
        ++stats_.backtracks;
        continue;
      }
      dfs(child);
    }
  }

  bool is_appended(const Node& n, int id) const {
    const auto& a = base_.activities[id];
    return a.chain_index < n.next[a.job];
  }

  Time agv_end(const Node& n, int b) const { return n.agv_last[b] < 0 ? 0 : n.state.activities[n.agv_last[b]].ect(); }
  int agv_at(const Node& n, int b) const {
    if (n.agv_last[b] < 0) return base_.agv_home ? *base_.agv_home : -1;
    return n.state.activities[n.agv_last[b]].to;
  }

  const Instance& inst_;
  SolveOptions opts_;
  Clock::time_point start_;
  SearchState base_;
  std::vector<int> offset_, chain_len_, group_of_;
  int total_ = 0;
  bool pooled_agvs_ = false;
  Time target_ = 0;
  bool stop_ = false;
  bool aborted_ = false;
  bool has_solution_ = false;
  std::function<bool(const Schedule&)> on_solution_;
  SolveStats stats_;
};

/// All AGV assignments in restricted-growth order (first transport on AGV 0).
inline void for_each_assignment(const Instance& inst, const ModelOptions& opts,
                                const std::function<bool(const AgvAssignment&)>& visit) {
  std::vector<std::pair<int, int>> slots;
  AgvAssignment a(inst.jobs.size());
  for (int j = 0; j < static_cast<int>(inst.jobs.size()); ++j) {
    a[j].assign(transition_count(inst, j), -1);
    for (int t = 0; t < transition_count(inst, j); ++t)
      if (transition_modelled(inst, j, t, opts)) slots.push_back({j, t});
  }
  std::function<bool(std::size_t, int)> rec = [&](std::size_t k, int used) -> bool {
    if (k == slots.size()) return visit(a);
    const int limit = std::min(inst.agv_count - 1, used);
    for (int b = 0; b <= limit; ++b) {
      a[slots[k].first][slots[k].second] = b;
      if (!rec(k + 1, std::max(used, b + 1))) return false;
    }
    return true;
  };
  rec(0, 0);
}

}  // namespace detail

inline SolveResult solve(const Instance& inst, const SolveOptions& opts = {}) {
  if (auto v = validate_instance(inst); !v.empty()) throw std::invalid_argument("invalid instance:\n" + describe(v));
  if (!opts.enumerate_assignments || opts.assignment || inst.agv_count == 1) {
    detail::Search search(inst, opts);
    return search.run();
  }

  // One search per assignment, sharing the incumbent as an upper bound.
  const auto start = std::chrono::steady_clock::now();
  SolveResult best;
  bool have = false, complete = true;
  std::int64_t nodes_left = opts.node_budget;
  SolveStats total;
  detail::for_each_assignment(inst, opts.model, [&](const AgvAssignment& a) {
    SolveOptions sub = opts;
    sub.assignment = a;
    sub.enumerate_assignments = false;
    sub.mode = BoundingMode::monotonous;
    if (opts.node_budget > 0) sub.node_budget = nodes_left;
    if (opts.time_budget_ms > 0) {
      const auto used = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
      if (used >= opts.time_budget_ms) {
        complete = false;
        return false;
      }
      sub.time_budget_ms = opts.time_budget_ms - used;
    }
    detail::Search search(inst, sub);
    auto r = search.run(have ? std::optional<Time>(best.schedule.makespan) : std::nullopt);
    total.nodes += r.stats.nodes;
    total.backtracks += r.stats.backtracks;
    ++total.assignments_tried;
    if (opts.node_budget > 0) nodes_left -= r.stats.nodes;
    const bool finished = !search.aborted();
    if (search.found_solution() && (!have || r.schedule.makespan < best.schedule.makespan)) {
      best.schedule = r.schedule;
      best.incumbents.push_back(r.schedule.makespan);
      total.nodes_to_incumbent = total.nodes;
      total.time_to_incumbent_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      have = true;
    }
    if (!finished) complete = false;
    return complete;
  });
  total.time_total_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  best.stats = total;
  best.optimal = have && complete;
  best.lower_bound = best.optimal ? best.schedule.makespan : initial_bounds(inst, opts.model).lower;
  return best;
}

}  // namespace agvjsp::cp
