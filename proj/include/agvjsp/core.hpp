#pragma once

// Problem instances, schedules and feasibility checks for the job shop with
// AGV transport. Every solver in the library speaks these types.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace agvjsp {

using Time = std::int64_t;

enum class LocationKind { start, machine, target };

struct Location {
  int id = 0;
  LocationKind kind = LocationKind::machine;
  std::optional<int> machine;  // present iff kind == machine
};

/// Square matrix of travel times between locations.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n, Time fill = 0) : n_(n), d_(n * n, fill) {}
  explicit DistanceMatrix(const std::vector<std::vector<Time>>& rows) : n_(rows.size()), d_(n_ * n_, 0) {
    for (std::size_t p = 0; p < n_; ++p) {
      if (rows[p].size() != n_) throw std::invalid_argument("distance matrix must be square");
      for (std::size_t q = 0; q < n_; ++q) d_[p * n_ + q] = rows[p][q];
    }
  }

  std::size_t size() const { return n_; }
  Time operator()(std::size_t p, std::size_t q) const { return d_[p * n_ + q]; }
  Time& operator()(std::size_t p, std::size_t q) { return d_[p * n_ + q]; }

  Time max_entry() const { return d_.empty() ? 0 : *std::max_element(d_.begin(), d_.end()); }

  std::vector<std::vector<Time>> rows() const {
    std::vector<std::vector<Time>> out(n_, std::vector<Time>(n_));
    for (std::size_t p = 0; p < n_; ++p)
      for (std::size_t q = 0; q < n_; ++q) out[p][q] = (*this)(p, q);
    return out;
  }

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Time> d_;
};

struct Operation {
  int job = 0;
  int position = 0;
  int machine = 0;
  Time duration = 1;
};

struct Job {
  int id = 0;
  std::vector<Operation> operations;
};

struct Instance {
  int machines = 0;
  std::vector<Job> jobs;
  int agv_count = 1;
  std::vector<Location> locations;
  DistanceMatrix distances;
  int start_location = 0;
  int target_location = 0;

  int operation_count() const {
    int n = 0;
    for (const auto& j : jobs) n += static_cast<int>(j.operations.size());
    return n;
  }

  /// Location id hosting machine m, or -1.
  int machine_location(int m) const {
    for (const auto& l : locations)
      if (l.kind == LocationKind::machine && l.machine && *l.machine == m) return l.id;
    return -1;
  }
};

/// Which optional parts of the scenario are modelled.
struct ModelOptions {
  /// Start->first machine and last machine->Target moves are real transports.
  bool start_target_transports = true;
  /// Every AGV sits on Start at time 0, so its first pickup at P costs d(Start, P).
  bool agv_initial_at_start = true;

  friend bool operator==(const ModelOptions&, const ModelOptions&) = default;
};

struct TransportPayload {
  int job = 0;
  int transition = 0;  // 0 = Start->op0, k = op(k-1)->op(k), last = ->Target

  friend bool operator==(const TransportPayload&, const TransportPayload&) = default;
};

struct TransportTask {
  int from = 0;
  int to = 0;
  std::optional<TransportPayload> payload;  // absent for empty repositioning moves
  int agv = 0;
  Time start = 0;
  Time end = 0;

  friend bool operator==(const TransportTask&, const TransportTask&) = default;
};

struct MachineTask {
  int job = 0;
  int position = 0;
  int machine = 0;
  Time start = 0;
  Time end = 0;

  friend bool operator==(const MachineTask&, const MachineTask&) = default;
};

struct Schedule {
  std::vector<MachineTask> machine_tasks;
  std::vector<TransportTask> transport_tasks;
  Time makespan = 0;

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

struct Violation {
  std::string rule;
  std::string detail;
  std::vector<int> ids;
};

inline std::string describe(const std::vector<Violation>& vs) {
  std::ostringstream os;
  for (const auto& v : vs) os << v.rule << ": " << v.detail << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Job chains: the alternating transport/processing sequence of one workpiece.

struct ChainTask {
  bool transport = false;
  int job = 0;
  int position = 0;  // operation position, or transition index for transports
  int machine = -1;  // processing only
  int from = -1;     // transport only
  int to = -1;
  Time duration = 0;
};

inline int transition_count(const Instance& inst, int job) {
  return static_cast<int>(inst.jobs[job].operations.size()) + 1;
}

/// True when the transition index is an actual transport under `opts`.
inline bool transition_modelled(const Instance& inst, int job, int transition, const ModelOptions& opts) {
  const int k = static_cast<int>(inst.jobs[job].operations.size());
  if (transition < 0 || transition > k) return false;
  if (transition == 0 || transition == k) return opts.start_target_transports;
  return true;
}

inline std::pair<int, int> transition_endpoints(const Instance& inst, int job, int transition) {
  const auto& ops = inst.jobs[job].operations;
  const int k = static_cast<int>(ops.size());
  const int from = transition == 0 ? inst.start_location : inst.machine_location(ops[transition - 1].machine);
  const int to = transition == k ? inst.target_location : inst.machine_location(ops[transition].machine);
  return {from, to};
}

inline std::vector<ChainTask> job_chain(const Instance& inst, int job, const ModelOptions& opts) {
  std::vector<ChainTask> chain;
  const auto& ops = inst.jobs[job].operations;
  const int k = static_cast<int>(ops.size());
  for (int t = 0; t <= k; ++t) {
    if (transition_modelled(inst, job, t, opts)) {
      auto [from, to] = transition_endpoints(inst, job, t);
      chain.push_back({true, job, t, -1, from, to, inst.distances(from, to)});
    }
    if (t < k) chain.push_back({false, job, t, ops[t].machine, -1, -1, ops[t].duration});
  }
  return chain;
}

inline Time loaded_transport_total(const Instance& inst, const ModelOptions& opts) {
  Time total = 0;
  for (int j = 0; j < static_cast<int>(inst.jobs.size()); ++j)
    for (const auto& c : job_chain(inst, j, opts))
      if (c.transport) total += c.duration;
  return total;
}

inline Time processing_total(const Instance& inst) {
  Time total = 0;
  for (const auto& j : inst.jobs)
    for (const auto& o : j.operations) total += o.duration;
  return total;
}

inline Time chain_length(const Instance& inst, int job, const ModelOptions& opts) {
  Time total = 0;
  for (const auto& c : job_chain(inst, job, opts)) total += c.duration;
  return total;
}

// ---------------------------------------------------------------------------
// Validation

inline std::vector<Violation> validate_instance(const Instance& inst) {
  std::vector<Violation> out;
  auto add = [&](std::string rule, std::string detail, std::vector<int> ids = {}) {
    out.push_back({std::move(rule), std::move(detail), std::move(ids)});
  };
  const int L = static_cast<int>(inst.locations.size());
  if (inst.machines < 0) add("index-range", "negative machine count");
  if (inst.agv_count < 1) add("agv-count", "at least one AGV is required");
  if (static_cast<int>(inst.distances.size()) != L)
    add("index-range", "distance matrix size " + std::to_string(inst.distances.size()) + " != location count " +
                           std::to_string(L));
  for (int i = 0; i < L; ++i)
    if (inst.locations[i].id != i) add("index-range", "location ids must be dense, got " + std::to_string(inst.locations[i].id) + " at " + std::to_string(i), {i});
  int starts = 0, targets = 0;
  std::vector<int> machine_seen(std::max(inst.machines, 0), 0);
  for (const auto& l : inst.locations) {
    if (l.kind == LocationKind::start) ++starts;
    if (l.kind == LocationKind::target) ++targets;
    if (l.kind == LocationKind::machine) {
      if (!l.machine || *l.machine < 0 || *l.machine >= inst.machines)
        add("index-range", "machine location " + std::to_string(l.id) + " has no valid machine", {l.id});
      else
        ++machine_seen[*l.machine];
    } else if (l.machine) {
      add("index-range", "non-machine location " + std::to_string(l.id) + " names a machine", {l.id});
    }
  }
  if (starts != 1) add("start-target", "expected exactly one Start location");
  if (targets != 1) add("start-target", "expected exactly one Target location");
  for (int m = 0; m < inst.machines; ++m)
    if (machine_seen[m] != 1) add("index-range", "machine " + std::to_string(m) + " needs exactly one location", {m});
  auto in_range = [&](int l) { return l >= 0 && l < L; };
  if (!in_range(inst.start_location) || inst.locations[inst.start_location].kind != LocationKind::start)
    add("start-target", "start_location does not name the Start location");
  if (!in_range(inst.target_location) || inst.locations[inst.target_location].kind != LocationKind::target)
    add("start-target", "target_location does not name the Target location");

  for (int j = 0; j < static_cast<int>(inst.jobs.size()); ++j) {
    const auto& job = inst.jobs[j];
    if (job.id != j) add("index-range", "job ids must be dense", {j});
    if (job.operations.empty()) add("empty-job", "job " + std::to_string(j) + " has no operations", {j});
    for (int p = 0; p < static_cast<int>(job.operations.size()); ++p) {
      const auto& op = job.operations[p];
      if (op.job != j || op.position != p)
        add("index-range", "operation " + std::to_string(j) + "/" + std::to_string(p) + " carries wrong indices", {j, p});
      if (op.machine < 0 || op.machine >= inst.machines)
        add("index-range", "operation " + std::to_string(j) + "/" + std::to_string(p) + " uses unknown machine", {j, p});
      if (op.duration < 1)
        add("duration", "operation " + std::to_string(j) + "/" + std::to_string(p) + " has non-positive duration", {j, p});
    }
  }

  if (static_cast<int>(inst.distances.size()) == L) {
    const auto& d = inst.distances;
    for (int p = 0; p < L; ++p) {
      if (d(p, p) != 0) add("zero-diagonal", "d(" + std::to_string(p) + "," + std::to_string(p) + ") = " + std::to_string(d(p, p)), {p});
      for (int q = 0; q < L; ++q)
        if (d(p, q) < 0) add("non-negative", "d(" + std::to_string(p) + "," + std::to_string(q) + ") < 0", {p, q});
    }
    for (int p = 0; p < L; ++p)
      for (int q = 0; q < L; ++q)
        for (int r = 0; r < L; ++r)
          if (d(p, q) > d(p, r) + d(r, q))
            add("triangle", "d(" + std::to_string(p) + "," + std::to_string(q) + ") > d(" + std::to_string(p) + "," +
                                std::to_string(r) + ") + d(" + std::to_string(r) + "," + std::to_string(q) + ")",
                {p, q, r});
  }
  return out;
}

inline Time makespan(const Schedule& s) {
  Time m = 0;
  for (const auto& t : s.machine_tasks) m = std::max(m, t.end);
  for (const auto& t : s.transport_tasks) m = std::max(m, t.end);
  return m;
}

/// Order of an AGV's transports that satisfies the transition inequality
/// e_i + d(Q_i, P_j) <= s_j for consecutive tasks, if one exists. Tasks are
/// sorted by (start, end); only ties of identical zero-length tasks leave any
/// freedom, and those are resolved by permutation.
inline std::vector<int> agv_task_order(const std::vector<TransportTask>& tasks, const std::vector<int>& ids,
                                       const DistanceMatrix& d) {
  std::vector<int> order = ids;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (tasks[a].start != tasks[b].start) return tasks[a].start < tasks[b].start;
    return tasks[a].end < tasks[b].end;
  });
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t k = i + 1;
    while (k < order.size() && tasks[order[k]].start == tasks[order[i]].start && tasks[order[k]].end == tasks[order[i]].end)
      ++k;
    const bool zero_len = tasks[order[i]].end == tasks[order[i]].start;
    if (zero_len && k - i > 1 && k - i <= 6) {
      auto ok = [&](std::size_t a, std::size_t b) {
        for (std::size_t x = a; x + 1 < b; ++x)
          if (d(tasks[order[x]].to, tasks[order[x + 1]].from) != 0) return false;
        return true;
      };
      std::sort(order.begin() + i, order.begin() + k);
      do {
        if (ok(i, k)) break;
      } while (std::next_permutation(order.begin() + i, order.begin() + k));
    }
    i = k;
  }
  return order;
}

inline std::vector<Violation> validate_schedule(const Instance& inst, const Schedule& s, const ModelOptions& opts = {}) {
  std::vector<Violation> out;
  auto add = [&](std::string rule, std::string detail, std::vector<int> ids = {}) {
    out.push_back({std::move(rule), std::move(detail), std::move(ids)});
  };
  const auto& d = inst.distances;
  const int N = static_cast<int>(inst.jobs.size());
  const int L = static_cast<int>(inst.locations.size());

  // (a) every operation exactly once, on its machine, with its duration
  std::vector<std::vector<int>> op_task(N);
  for (int j = 0; j < N; ++j) op_task[j].assign(inst.jobs[j].operations.size(), -1);
  for (int k = 0; k < static_cast<int>(s.machine_tasks.size()); ++k) {
    const auto& t = s.machine_tasks[k];
    if (t.job < 0 || t.job >= N || t.position < 0 || t.position >= static_cast<int>(op_task[t.job].size())) {
      add("unknown-operation", "machine task " + std::to_string(k) + " names no operation", {k});
      continue;
    }
    if (op_task[t.job][t.position] >= 0) {
      add("duplicate-operation", "operation " + std::to_string(t.job) + "/" + std::to_string(t.position) + " scheduled twice", {k});
      continue;
    }
    op_task[t.job][t.position] = k;
    const auto& op = inst.jobs[t.job].operations[t.position];
    if (t.machine != op.machine) add("wrong-machine", "operation " + std::to_string(t.job) + "/" + std::to_string(t.position) + " on wrong machine", {k});
    if (t.end - t.start != op.duration) add("duration", "operation " + std::to_string(t.job) + "/" + std::to_string(t.position) + " has wrong duration", {k});
    if (t.start < 0) add("negative-start", "machine task " + std::to_string(k) + " starts before 0", {k});
  }
  for (int j = 0; j < N; ++j)
    for (int p = 0; p < static_cast<int>(op_task[j].size()); ++p)
      if (op_task[j][p] < 0) add("missing-operation", "operation " + std::to_string(j) + "/" + std::to_string(p) + " not scheduled", {j, p});

  // (b) machine exclusivity
  std::vector<std::vector<int>> per_machine(std::max(inst.machines, 0));
  for (int k = 0; k < static_cast<int>(s.machine_tasks.size()); ++k) {
    const int m = s.machine_tasks[k].machine;
    if (m >= 0 && m < inst.machines) per_machine[m].push_back(k);
  }
  for (auto& ids : per_machine) {
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
      const auto &x = s.machine_tasks[a], &y = s.machine_tasks[b];
      return std::tie(x.start, x.end) < std::tie(y.start, y.end);
    });
    int widest = -1;
    for (int k : ids) {
      if (widest >= 0 && s.machine_tasks[k].start < s.machine_tasks[widest].end)
        add("machine-overlap", "machine tasks " + std::to_string(widest) + " and " + std::to_string(k) + " overlap", {widest, k});
      if (widest < 0 || s.machine_tasks[k].end > s.machine_tasks[widest].end) widest = k;
    }
  }

  // (c) job order
  for (int j = 0; j < N; ++j)
    for (int p = 0; p + 1 < static_cast<int>(op_task[j].size()); ++p) {
      const int a = op_task[j][p], b = op_task[j][p + 1];
      if (a >= 0 && b >= 0 && s.machine_tasks[b].start < s.machine_tasks[a].end)
        add("job-order", "job " + std::to_string(j) + " operation " + std::to_string(p + 1) + " starts before " + std::to_string(p) + " ends", {a, b});
    }

  // (f) workpiece path, (g) one workpiece per transport, transport durations
  std::vector<std::vector<int>> carried(N);
  for (int j = 0; j < N; ++j) carried[j].assign(transition_count(inst, j), -1);
  for (int k = 0; k < static_cast<int>(s.transport_tasks.size()); ++k) {
    const auto& t = s.transport_tasks[k];
    if (t.from < 0 || t.from >= L || t.to < 0 || t.to >= L) {
      add("unknown-location", "transport " + std::to_string(k) + " uses unknown location", {k});
      continue;
    }
    if (t.agv < 0 || t.agv >= inst.agv_count) add("unknown-agv", "transport " + std::to_string(k) + " uses unknown AGV", {k});
    if (t.end - t.start != d(t.from, t.to))
      add("transport-duration", "transport " + std::to_string(k) + " does not last d(from,to)", {k});
    if (t.start < 0) add("negative-start", "transport " + std::to_string(k) + " starts before 0", {k});
    if (!t.payload) continue;
    const auto [job, tr] = *t.payload;
    if (job < 0 || job >= N || !transition_modelled(inst, job, tr, opts)) {
      add("workpiece-path", "transport " + std::to_string(k) + " carries a workpiece along no modelled transition", {k});
      continue;
    }
    if (carried[job][tr] >= 0) {
      add("workpiece-path", "transition " + std::to_string(job) + "/" + std::to_string(tr) + " transported twice", {carried[job][tr], k});
      continue;
    }
    carried[job][tr] = k;
    auto [from, to] = transition_endpoints(inst, job, tr);
    if (t.from != from || t.to != to)
      add("workpiece-path", "transport " + std::to_string(k) + " does not follow job " + std::to_string(job) + "'s route", {k});
  }
  for (int j = 0; j < N; ++j)
    for (int tr = 0; tr < transition_count(inst, j); ++tr)
      if (transition_modelled(inst, j, tr, opts) && carried[j][tr] < 0)
        add("workpiece-path", "transition " + std::to_string(j) + "/" + std::to_string(tr) + " has no transport", {j, tr});

  // (d) transport/processing coupling
  for (int j = 0; j < N; ++j) {
    const int k = static_cast<int>(op_task[j].size());
    for (int tr = 0; tr <= k; ++tr) {
      const int t = carried[j][tr];
      if (t < 0) continue;
      const auto& task = s.transport_tasks[t];
      if (tr < k && op_task[j][tr] >= 0 && s.machine_tasks[op_task[j][tr]].start < task.end)
        add("delivery-before-operation", "job " + std::to_string(j) + " operation " + std::to_string(tr) + " starts before its delivery ends", {t, op_task[j][tr]});
      if (tr > 0 && op_task[j][tr - 1] >= 0 && task.start < s.machine_tasks[op_task[j][tr - 1]].end)
        add("operation-before-pickup", "job " + std::to_string(j) + " transport " + std::to_string(tr) + " leaves before operation " + std::to_string(tr - 1) + " ends", {op_task[j][tr - 1], t});
    }
  }

  // (e) AGV sequences and transition times
  std::vector<std::vector<int>> per_agv(std::max(inst.agv_count, 0));
  for (int k = 0; k < static_cast<int>(s.transport_tasks.size()); ++k) {
    const auto& t = s.transport_tasks[k];
    if (t.agv >= 0 && t.agv < inst.agv_count && t.from >= 0 && t.from < L && t.to >= 0 && t.to < L) per_agv[t.agv].push_back(k);
  }
  for (int b = 0; b < static_cast<int>(per_agv.size()); ++b) {
    const auto order = agv_task_order(s.transport_tasks, per_agv[b], d);
    if (!order.empty() && opts.agv_initial_at_start) {
      const auto& first = s.transport_tasks[order.front()];
      if (first.start < d(inst.start_location, first.from))
        add("agv-initial", "AGV " + std::to_string(b) + " cannot reach its first pickup from Start in time", {order.front()});
    }
    for (std::size_t x = 0; x + 1 < order.size(); ++x) {
      const auto &a = s.transport_tasks[order[x]], &c = s.transport_tasks[order[x + 1]];
      if (c.start < a.end)
        add("agv-overlap", "AGV " + std::to_string(b) + " transports " + std::to_string(order[x]) + " and " + std::to_string(order[x + 1]) + " overlap", {order[x], order[x + 1]});
      else if (a.end + d(a.to, c.from) > c.start)
        add("transition-time", "AGV " + std::to_string(b) + ": " + std::to_string(a.end) + " + " + std::to_string(d(a.to, c.from)) + " > " + std::to_string(c.start), {order[x], order[x + 1]});
    }
  }

  if (s.makespan != makespan(s))
    add("makespan", "stored makespan " + std::to_string(s.makespan) + " != latest end " + std::to_string(makespan(s)));
  return out;
}

// ---------------------------------------------------------------------------
// Append-style schedule construction: tasks are added job by job, each at the
// earliest time its job predecessor and its resource allow.

class ScheduleBuilder {
 public:
  ScheduleBuilder(const Instance& inst, const ModelOptions& opts) : inst_(&inst), opts_(opts) {
    const int N = static_cast<int>(inst.jobs.size());
    chains_.reserve(N);
    for (int j = 0; j < N; ++j) chains_.push_back(job_chain(inst, j, opts));
    next_.assign(N, 0);
    job_ready_.assign(N, 0);
    machine_free_.assign(inst.machines, 0);
    agv_free_.assign(inst.agv_count, 0);
    agv_at_.assign(inst.agv_count, opts.agv_initial_at_start ? inst.start_location : -1);
  }

  bool job_done(int j) const { return next_[j] >= static_cast<int>(chains_[j].size()); }
  bool done() const {
    for (int j = 0; j < static_cast<int>(chains_.size()); ++j)
      if (!job_done(j)) return false;
    return true;
  }
  const ChainTask& next_task(int j) const { return chains_[j][next_[j]]; }

  Time earliest_start(int j, int agv = 0) const {
    const auto& c = next_task(j);
    if (!c.transport) return std::max(job_ready_[j], machine_free_[c.machine]);
    const Time reach = agv_at_[agv] < 0 ? 0 : inst_->distances(agv_at_[agv], c.from);
    return std::max(job_ready_[j], agv_free_[agv] + reach);
  }

  Time append(int j, int agv = 0) {
    const auto& c = next_task(j);
    const Time s = earliest_start(j, agv);
    const Time e = s + c.duration;
    if (c.transport) {
      schedule_.transport_tasks.push_back({c.from, c.to, TransportPayload{j, c.position}, agv, s, e});
      agv_free_[agv] = e;
      agv_at_[agv] = c.to;
    } else {
      schedule_.machine_tasks.push_back({j, c.position, c.machine, s, e});
      machine_free_[c.machine] = e;
    }
    job_ready_[j] = e;
    ++next_[j];
    schedule_.makespan = std::max(schedule_.makespan, e);
    return s;
  }

  const Schedule& schedule() const { return schedule_; }

 private:
  const Instance* inst_;
  ModelOptions opts_;
  std::vector<std::vector<ChainTask>> chains_;
  std::vector<int> next_;
  std::vector<Time> job_ready_, machine_free_, agv_free_;
  std::vector<int> agv_at_;
  Schedule schedule_;
};

/// Every job in turn, all transports on AGV 0.
inline Schedule serial_schedule(const Instance& inst, const ModelOptions& opts = {}) {
  ScheduleBuilder b(inst, opts);
  for (int j = 0; j < static_cast<int>(inst.jobs.size()); ++j)
    while (!b.job_done(j)) b.append(j, 0);
  return b.schedule();
}

/// Greedy list schedule: repeatedly append the task (and AGV) finishing first.
inline Schedule greedy_schedule(const Instance& inst, const ModelOptions& opts = {}) {
  ScheduleBuilder b(inst, opts);
  while (!b.done()) {
    int best_job = -1, best_agv = 0;
    Time best_end = 0;
    for (int j = 0; j < static_cast<int>(inst.jobs.size()); ++j) {
      if (b.job_done(j)) continue;
      const auto& c = b.next_task(j);
      const int agvs = c.transport ? inst.agv_count : 1;
      for (int a = 0; a < agvs; ++a) {
        const Time e = b.earliest_start(j, a) + c.duration;
        if (best_job < 0 || e < best_end) best_job = j, best_agv = a, best_end = e;
      }
    }
    b.append(best_job, best_agv);
  }
  return b.schedule();
}

/// Relabel jobs: job j of the input becomes job perm[j].
inline Instance permute_jobs(const Instance& inst, const std::vector<int>& perm) {
  Instance out = inst;
  for (int j = 0; j < static_cast<int>(inst.jobs.size()); ++j) {
    Job job = inst.jobs[j];
    job.id = perm[j];
    for (auto& op : job.operations) op.job = perm[j];
    out.jobs[perm[j]] = std::move(job);
  }
  return out;
}

inline Schedule permute_jobs(const Schedule& s, const std::vector<int>& perm) {
  Schedule out = s;
  for (auto& t : out.machine_tasks) t.job = perm[t.job];
  for (auto& t : out.transport_tasks)
    if (t.payload) t.payload->job = perm[t.payload->job];
  return out;
}

}  // namespace agvjsp
