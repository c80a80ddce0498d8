#pragma once

// Ground truth for small inputs: exhaustive schedule search, exhaustive QUBO
// minimization, and the schedule -> bit vector encoding used to cross-check
// the two models.

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "agvjsp/core.hpp"
#include "agvjsp/cp_solver.hpp"
#include "agvjsp/io.hpp"
#include "agvjsp/qubo_model.hpp"

namespace agvjsp::oracle {

struct BruteForceOptions {
  ModelOptions model;
  std::size_t max_states = 4'000'000;
};

struct BruteForceResult {
  Schedule schedule;
  Time makespan = 0;
  std::size_t states = 0;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Tasks are appended one at a time at the earliest moment their job and
// resource allow. Every left-shifted schedule arises from appending its tasks
// in start order, so minimizing over all append sequences is exact.
class Enumerator {
 public:
  Enumerator(const Instance& inst, const BruteForceOptions& opts) : inst_(inst), opts_(opts) {
    const int N = static_cast<int>(inst.jobs.size());
    for (int j = 0; j < N; ++j) chains_.push_back(job_chain(inst, j, opts.model));
    machine_uses_.assign(N, std::vector<std::vector<int>>());
    for (int j = 0; j < N; ++j) {
      // remaining machines of job j from chain index c onward
      const int len = static_cast<int>(chains_[j].size());
      machine_uses_[j].assign(len + 1, {});
      for (int c = len - 1; c >= 0; --c) {
        machine_uses_[j][c] = machine_uses_[j][c + 1];
        if (!chains_[j][c].transport) machine_uses_[j][c].push_back(chains_[j][c].machine);
      }
    }
  }

  struct State {
    std::vector<int> next;
    std::vector<Time> job_ready, machine_free, agv_free;
    std::vector<int> agv_at;
  };

  State root() const {
    State s;
    const int N = static_cast<int>(chains_.size());
    s.next.assign(N, 0);
    s.job_ready.assign(N, 0);
    s.machine_free.assign(inst_.machines, 0);
    s.agv_free.assign(inst_.agv_count, 0);
    s.agv_at.assign(inst_.agv_count, opts_.model.agv_initial_at_start ? inst_.start_location : -1);
    return s;
  }

  struct Move {
    int job;
    int agv;
  };

  std::vector<Move> moves(const State& s) const {
    std::vector<Move> out;
    for (int j = 0; j < static_cast<int>(chains_.size()); ++j) {
      if (s.next[j] >= static_cast<int>(chains_[j].size())) continue;
      if (!chains_[j][s.next[j]].transport) {
        out.push_back({j, -1});
        continue;
      }
      for (int b = 0; b < inst_.agv_count; ++b) {
        bool twin = false;
        for (int a = 0; a < b; ++a) twin = twin || (s.agv_free[a] == s.agv_free[b] && s.agv_at[a] == s.agv_at[b]);
        if (!twin) out.push_back({j, b});
      }
    }
    return out;
  }

  /// Applies the move and returns the task's start.
  Time apply(State& s, const Move& m) const {
    const auto& c = chains_[m.job][s.next[m.job]];
    Time start;
    if (c.transport) {
      const Time reach = s.agv_at[m.agv] < 0 ? 0 : inst_.distances(s.agv_at[m.agv], c.from);
      start = std::max(s.job_ready[m.job], s.agv_free[m.agv] + reach);
      s.agv_free[m.agv] = start + c.duration;
      s.agv_at[m.agv] = c.to;
    } else {
      start = std::max(s.job_ready[m.job], s.machine_free[c.machine]);
      s.machine_free[c.machine] = start + c.duration;
    }
    s.job_ready[m.job] = start + c.duration;
    ++s.next[m.job];
    return start;
  }

  std::string key(const State& s) const {
    // Machines no remaining operation needs no longer matter.
    std::vector<char> used(inst_.machines, 0);
    for (int j = 0; j < static_cast<int>(chains_.size()); ++j)
      for (int m : machine_uses_[j][s.next[j]]) used[m] = 1;
    std::vector<std::int64_t> k;
    for (int j = 0; j < static_cast<int>(chains_.size()); ++j) {
      k.push_back(s.next[j]);
      k.push_back(s.job_ready[j]);
    }
    for (int m = 0; m < inst_.machines; ++m) k.push_back(used[m] ? s.machine_free[m] : -1);
    // AGVs are interchangeable: order them canonically.
    std::vector<std::pair<Time, int>> agvs;
    for (int b = 0; b < inst_.agv_count; ++b) agvs.push_back({s.agv_free[b], s.agv_at[b]});
    std::sort(agvs.begin(), agvs.end());
    for (auto [f, at] : agvs) {
      k.push_back(f);
      k.push_back(at);
    }
    std::string out(k.size() * sizeof(std::int64_t), '\0');
    std::memcpy(out.data(), k.data(), out.size());
    return out;
  }

  Time best(const State& s) {
    const auto ms = moves(s);
    if (ms.empty()) return *std::max_element(s.job_ready.begin(), s.job_ready.end());
    auto k = key(s);
    if (auto it = memo_.find(k); it != memo_.end()) return it->second;
    if (memo_.size() >= opts_.max_states)
      throw BudgetExceeded("exhaustive search exceeded " + std::to_string(opts_.max_states) + " states (" +
                           std::to_string(inst_.jobs.size()) + " jobs, " + std::to_string(inst_.operation_count()) +
                           " operations, " + std::to_string(inst_.agv_count) + " AGVs)");
    Time v = std::numeric_limits<Time>::max();
    for (const auto& m : ms) {
      State child = s;
      apply(child, m);
      v = std::min(v, best(child));
    }
    memo_.emplace(std::move(k), v);
    return v;
  }

  BruteForceResult solve() {
    State s = root();
    BruteForceResult r;
    r.makespan = best(s);
    // Replay along any move that keeps the optimum.
    while (true) {
      const auto ms = moves(s);
      if (ms.empty()) break;
      bool stepped = false;
      for (const auto& m : ms) {
        State child = s;
        const Time start = apply(child, m);
        if (best(child) != r.makespan) continue;
        const auto& c = chains_[m.job][s.next[m.job]];
        if (c.transport)
          r.schedule.transport_tasks.push_back({c.from, c.to, TransportPayload{m.job, c.position}, m.agv, start, start + c.duration});
        else
          r.schedule.machine_tasks.push_back({m.job, c.position, c.machine, start, start + c.duration});
        s = std::move(child);
        stepped = true;
        break;
      }
      if (!stepped) throw std::logic_error("optimal replay lost its path");
    }
    r.schedule.makespan = makespan(r.schedule);
    r.states = memo_.size();
    return r;
  }

 private:
  const Instance& inst_;
  BruteForceOptions opts_;
  std::vector<std::vector<ChainTask>> chains_;
  std::vector<std::vector<std::vector<int>>> machine_uses_;
  std::unordered_map<std::string, Time> memo_;
};

}  // namespace detail

/// Minimum makespan over every append order and AGV choice.
/// Throws BudgetExceeded rather than returning a truncated answer.
inline BruteForceResult brute_force_optimal(const Instance& inst, const BruteForceOptions& opts = {}) {
  if (const auto vs = validate_instance(inst); !vs.empty()) throw std::invalid_argument("invalid instance: " + describe(vs));
  detail::Enumerator e(inst, opts);
  return e.solve();
}

// ---------------------------------------------------------------------------

struct ExhaustiveResult {
  qubo::Coefficient energy = 0;
  std::vector<qubo::BitVector> minimizers;
  bool minimizers_truncated = false;
};

/// Gray-code sweep over all 2^n vectors.
inline ExhaustiveResult exhaustive_qubo_minimum(const qubo::QuboMatrix& q, std::size_t max_variables = 22,
                                                std::size_t max_minimizers = 4096) {
  const std::size_t n = q.size();
  if (n > max_variables)
    throw BudgetExceeded("exhaustive QUBO sweep limited to " + std::to_string(max_variables) + " variables, got " +
                         std::to_string(n));
  // Dense symmetric copy, independent of the matrix's own adjacency.
  std::vector<qubo::Coefficient> dense(n * n, 0);
  for (const auto& e : q.entries()) {
    dense[e.row * n + e.col] += e.value;
    if (e.row != e.col) dense[e.col * n + e.row] += e.value;
  }
  qubo::BitVector x(n, 0);
  std::vector<qubo::Coefficient> field(n, 0);  // sum over j != i of Q_ij x_j
  qubo::Coefficient energy = q.constant();
  ExhaustiveResult r;
  r.energy = energy;
  r.minimizers.push_back(x);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < total; ++k) {
    const std::size_t i = static_cast<std::size_t>(__builtin_ctzll(k));
    const qubo::Coefficient sign = x[i] ? -1 : 1;
    energy += sign * (dense[i * n + i] + field[i]);
    x[i] ^= 1;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) field[j] += sign * dense[j * n + i];
    if (energy < r.energy) {
      r.energy = energy;
      r.minimizers.assign(1, x);
      r.minimizers_truncated = false;
    } else if (energy == r.energy) {
      if (r.minimizers.size() < max_minimizers)
        r.minimizers.push_back(x);
      else
        r.minimizers_truncated = true;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

/// One bit per standard operation and per parent group at its start, plus U
/// at the makespan.
inline qubo::BitVector encode_schedule_to_bits(const qubo::Model& m, const Schedule& s) {
  const Time T = m.indexer.horizon();
  qubo::BitVector x(m.indexer.size(), 0);
  auto check = [&](Time t, const std::string& what) {
    if (t < 0 || t >= T)
      throw std::out_of_range(what + " starts at " + std::to_string(t) + ", outside horizon " + std::to_string(T));
  };
  for (const auto& task : s.machine_tasks) {
    const int i = m.table.standard_index(task.job, task.position);
    if (i < 0) throw std::invalid_argument("machine task names no operation");
    check(task.start, "operation " + std::to_string(task.job) + "/" + std::to_string(task.position));
    x[m.indexer.x(i, task.start)] = 1;
  }
  for (const auto& task : s.transport_tasks) {
    if (!task.payload) continue;
    const int g = m.table.group_index(task.payload->job, task.payload->transition);
    if (g < 0) continue;  // transition not modelled by this build
    if (task.agv < 0 || task.agv >= m.table.agv_count) throw std::invalid_argument("transport on unknown AGV");
    check(task.start, "transport " + std::to_string(task.payload->job) + "/" + std::to_string(task.payload->transition));
    x[m.indexer.x(m.table.groups[g].members[task.agv], task.start)] = 1;
  }
  const Time ms = makespan(s);
  if (ms > T) throw std::out_of_range("makespan " + std::to_string(ms) + " exceeds horizon " + std::to_string(T));
  x[m.indexer.u(ms)] = 1;
  return x;
}

struct CrossCheck {
  std::string hash;
  Time makespan = 0;
  qubo::Coefficient energy = 0;
  bool pass = false;
};

/// Energy of the encoded schedule must equal its makespan.
inline CrossCheck cross_check(const Instance& inst, const Schedule& s, const std::string& hash,
                              const qubo::QuboBuildConfig& config) {
  const auto model = qubo::make_model(inst, config);
  const auto q = qubo::assemble_hamiltonian(model);
  const auto x = encode_schedule_to_bits(model, s);
  CrossCheck r{hash, makespan(s), qubo::evaluate_energy(q, x), false};
  r.pass = r.energy == r.makespan;
  return r;
}

struct CrossValidateOptions {
  std::optional<Time> horizon;             // default: initial upper bound + 1
  std::optional<qubo::Coefficient> alpha;  // default: 2 (T + 1)
  bool start_target_transports = true;
  cp::SolveOptions solve;
};

/// Solves with the CP solver, encodes the optimum, and evaluates it under the
/// QUBO built for the same instance.
inline CrossCheck cross_validate(const Instance& inst, const CrossValidateOptions& opts = {}) {
  cp::SolveOptions so = opts.solve;
  so.model.start_target_transports = opts.start_target_transports;
  const auto solved = cp::solve(inst, so);
  qubo::QuboBuildConfig config;
  config.start_target_transports = opts.start_target_transports;
  config.horizon = opts.horizon ? *opts.horizon : cp::initial_bounds(inst, so.model).upper + 1;
  config.horizon = std::max(config.horizon, solved.schedule.makespan);
  config.alpha = opts.alpha ? *opts.alpha : qubo::QuboBuildConfig::default_alpha(config.horizon);
  return cross_check(inst, solved.schedule, instance_hash(inst), config);
}

inline json to_json(const CrossCheck& c) {
  return {{"hash", c.hash}, {"makespan", c.makespan}, {"energy", c.energy}, {"pass", c.pass}};
}

}  // namespace agvjsp::oracle
