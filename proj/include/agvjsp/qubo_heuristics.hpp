#pragma once

// Local search over QUBO bit vectors, decoding of bit vectors back into
// schedules, and gap compaction of decoded schedules.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "agvjsp/core.hpp"
#include "agvjsp/qubo_model.hpp"

namespace agvjsp::qubo {

/// Energy change from flipping bit i: (1 - 2 x_i) (Q_ii + sum_j Q_ij x_j).
inline Coefficient flip_delta(const QuboMatrix& q, const BitVector& x, std::size_t i) {
  if (i >= q.size()) throw std::out_of_range("flip index " + std::to_string(i) + " out of range");
  Coefficient field = q.diagonal(i);
  auto [it, end] = q.neighbors(i);
  for (; it != end; ++it)
    if (x[it->index]) field += it->value;
  return x[i] ? -field : field;
}

namespace detail {

/// Bit vector with cached off-diagonal fields, so a flip costs one row.
class LocalState {
 public:
  LocalState(const QuboMatrix& q, BitVector x) : q_(&q), x_(std::move(x)), field_(q.size(), 0) {
    energy_ = evaluate_energy(q, x_);
    for (std::size_t i = 0; i < x_.size(); ++i) {
      if (!x_[i]) continue;
      auto [it, end] = q.neighbors(i);
      for (; it != end; ++it) field_[it->index] += it->value;
    }
  }

  Coefficient delta(std::size_t i) const {
    const Coefficient f = q_->diagonal(i) + field_[i];
    return x_[i] ? -f : f;
  }

  void flip(std::size_t i) {
    energy_ += delta(i);
    x_[i] ^= 1;
    const Coefficient sign = x_[i] ? 1 : -1;
    auto [it, end] = q_->neighbors(i);
    for (; it != end; ++it) field_[it->index] += sign * it->value;
  }

  const BitVector& bits() const { return x_; }
  Coefficient energy() const { return energy_; }

 private:
  const QuboMatrix* q_;
  BitVector x_;
  std::vector<Coefficient> field_;
  Coefficient energy_ = 0;
};

inline BitVector random_bits(std::size_t n, std::mt19937_64& rng) {
  BitVector x(n);
  std::bernoulli_distribution coin(0.5);
  for (auto& b : x) b = coin(rng) ? 1 : 0;
  return x;
}

}  // namespace detail

struct MinimizerResult {
  BitVector bits;
  Coefficient energy = 0;
  int restart = 0;  // which restart produced the result
  std::uint64_t seed = 0;
};

struct AnnealConfig {
  std::int64_t sweeps = 0;           // 0: 10 n
  double initial_temperature = 0;    // 0: 10 max |Q_ij|
  double final_temperature = 0.1;
  int temperature_steps = 100;
  int restarts = 1;
  std::uint64_t seed = 0;
};

struct TabuConfig {
  int tenure = 0;                   // 0: max(10, n / 20)
  std::int64_t max_iterations = 0;  // 0: 50 n
  int restarts = 1;
  std::uint64_t seed = 0;
};

/// Single-flip Metropolis sweeps under geometric cooling. Restart r uses seed + r.
inline MinimizerResult simulated_annealing(const QuboMatrix& q, const AnnealConfig& config = {}) {
  const std::size_t n = q.size();
  if (n == 0) throw std::invalid_argument("empty QUBO");
  const std::int64_t sweeps = config.sweeps > 0 ? config.sweeps : 10 * static_cast<std::int64_t>(n);
  const double t0 = config.initial_temperature > 0 ? config.initial_temperature
                                                   : 10.0 * std::max<Coefficient>(1, q.max_abs_coefficient());
  const double t1 = std::min(config.final_temperature, t0);
  const int steps = std::max(1, config.temperature_steps);
  const double ratio = steps > 1 ? std::pow(t1 / t0, 1.0 / (steps - 1)) : 1.0;

  MinimizerResult best;
  bool have = false;
  for (int r = 0; r < std::max(1, config.restarts); ++r) {
    std::mt19937_64 rng(config.seed + r);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    detail::LocalState s(q, detail::random_bits(n, rng));
    BitVector run_best = s.bits();
    Coefficient run_energy = s.energy();
    double temperature = t0;
    for (int step = 0; step < steps; ++step) {
      // spread the sweeps evenly over the temperature steps
      const std::int64_t here = sweeps / steps + (step < sweeps % steps ? 1 : 0);
      for (std::int64_t sweep = 0; sweep < here; ++sweep)
        for (std::size_t i = 0; i < n; ++i) {
          const Coefficient d = s.delta(i);
          if (d <= 0 || unit(rng) < std::exp(-static_cast<double>(d) / temperature)) {
            s.flip(i);
            if (s.energy() < run_energy) {
              run_energy = s.energy();
              run_best = s.bits();
            }
          }
        }
      temperature *= ratio;
    }
    if (!have || run_energy < best.energy) {
      best = {run_best, run_energy, r, config.seed + r};
      have = true;
    }
  }
  return best;
}

/// Steepest single-flip descent; recently flipped bits are tabu unless the
/// move beats the best energy seen. Ties are broken at random.
inline MinimizerResult tabu_search(const QuboMatrix& q, const TabuConfig& config = {}) {
  const std::size_t n = q.size();
  if (n == 0) throw std::invalid_argument("empty QUBO");
  const std::int64_t tenure = config.tenure > 0 ? config.tenure : std::max<std::int64_t>(10, n / 20);
  const std::int64_t iterations = config.max_iterations > 0 ? config.max_iterations : 50 * static_cast<std::int64_t>(n);

  MinimizerResult best;
  bool have = false;
  for (int r = 0; r < std::max(1, config.restarts); ++r) {
    std::mt19937_64 rng(config.seed + r);
    detail::LocalState s(q, detail::random_bits(n, rng));
    BitVector run_best = s.bits();
    Coefficient run_energy = s.energy();
    std::vector<std::int64_t> tabu_until(n, 0);
    std::vector<std::size_t> ties;
    for (std::int64_t it = 0; it < iterations; ++it) {
      Coefficient pick = std::numeric_limits<Coefficient>::max();
      ties.clear();
      for (std::size_t i = 0; i < n; ++i) {
        const Coefficient d = s.delta(i);
        const bool allowed = tabu_until[i] <= it || s.energy() + d < run_energy;
        if (!allowed) continue;
        if (d < pick) {
          pick = d;
          ties.assign(1, i);
        } else if (d == pick) {
          ties.push_back(i);
        }
      }
      if (ties.empty()) continue;  // everything tabu: wait for tenures to expire
      const std::size_t i = ties.size() == 1 ? ties[0] : ties[std::uniform_int_distribution<std::size_t>(0, ties.size() - 1)(rng)];
      s.flip(i);
      tabu_until[i] = it + 1 + tenure;
      if (s.energy() < run_energy) {
        run_energy = s.energy();
        run_best = s.bits();
      }
    }
    if (!have || run_energy < best.energy) {
      best = {run_best, run_energy, r, config.seed + r};
      have = true;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Decoding

struct DecodeViolation {
  Term term = Term::h1;
  std::string detail;
  std::vector<int> witness;
};

struct DecodedSchedule {
  std::optional<Schedule> schedule;
  std::vector<DecodeViolation> violations;
  Coefficient energy = 0;
};

/// Schedule options a decoded bit vector is checked against: the QUBO places
/// no constraint on where an AGV starts.
inline ModelOptions decode_options(const QuboBuildConfig& config) { return {config.start_target_transports, false}; }

inline Term term_for_rule(const std::string& rule) {
  if (rule == "machine-overlap") return Term::h2;
  if (rule == "job-order") return Term::h3;
  if (rule == "agv-overlap" || rule == "transition-time") return Term::h7;
  if (rule == "delivery-before-operation") return Term::h8;
  if (rule == "operation-before-pickup") return Term::h9;
  return Term::h1;
}

inline DecodedSchedule decode_bits(const Model& m, const QuboMatrix& q, const BitVector& x) {
  if (x.size() != m.indexer.size()) throw std::invalid_argument("bit vector does not match the build");
  DecodedSchedule out;
  out.energy = evaluate_energy(q, x);
  const Time T = m.indexer.horizon();
  const auto& tab = m.table;
  auto add = [&](Term t, std::string detail, std::vector<int> witness) {
    out.violations.push_back({t, std::move(detail), std::move(witness)});
  };

  std::vector<Time> start(tab.total(), -1);
  for (int i = 0; i < tab.standard_count(); ++i) {
    int count = 0;
    for (Time t = 0; t < T; ++t)
      if (x[m.indexer.x(i, t)]) ++count, start[i] = t;
    if (count != 1)
      add(Term::h1, "operation " + std::to_string(tab.standard[i].job) + "/" + std::to_string(tab.standard[i].position) +
                        " has " + std::to_string(count) + " start bits", {i});
  }
  std::vector<int> chosen(tab.groups.size(), -1);
  for (int g = 0; g < static_cast<int>(tab.groups.size()); ++g) {
    int count = 0;
    for (int op : tab.groups[g].members)
      for (Time t = 0; t < T; ++t)
        if (x[m.indexer.x(op, t)]) ++count, chosen[g] = op, start[op] = t;
    if (count != 1)
      add(Term::h6, "transport " + std::to_string(tab.groups[g].job) + "/" + std::to_string(tab.groups[g].transition) +
                        " has " + std::to_string(count) + " start bits", {g});
  }
  int u_count = 0;
  Time bound = 0;
  for (Time t = 0; t <= T; ++t)
    if (x[m.indexer.u(t)]) ++u_count, bound = t;
  if (u_count != 1) add(Term::h4, std::to_string(u_count) + " makespan bits set", {});
  if (!out.violations.empty()) return out;

  Schedule s;
  for (int i = 0; i < tab.standard_count(); ++i) {
    const auto& op = tab.standard[i];
    s.machine_tasks.push_back({op.job, op.position, op.machine, start[i], start[i] + op.duration});
  }
  for (int g = 0; g < static_cast<int>(tab.groups.size()); ++g) {
    const auto& w = tab.walk(chosen[g]);
    s.transport_tasks.push_back({w.source, w.destination, TransportPayload{tab.groups[g].job, tab.groups[g].transition}, w.agv,
                                 start[chosen[g]], start[chosen[g]] + w.duration});
  }
  s.makespan = makespan(s);
  for (int i = 0; i < tab.total(); ++i)
    if (start[i] >= 0 && start[i] + tab.duration(i) > bound)
      add(Term::h5, "operation " + std::to_string(i) + " ends after the makespan bit " + std::to_string(bound), {i});
  for (const auto& v : validate_schedule(*m.instance, s, decode_options(m.config)))
    add(term_for_rule(v.rule), v.rule + ": " + v.detail, v.ids);
  if (out.violations.empty()) out.schedule = std::move(s);
  return out;
}

// ---------------------------------------------------------------------------
// Gap compaction

/// Restarts every task as early as its job, its resource predecessor and AGV
/// travel allow, keeping each resource's order and each AGV assignment.
/// Throws std::invalid_argument on an infeasible input.
inline Schedule compact_gaps(const Instance& inst, const Schedule& s, const ModelOptions& opts = {}) {
  if (const auto vs = validate_schedule(inst, s, opts); !vs.empty())
    throw std::invalid_argument("cannot compact an infeasible schedule:\n" + describe(vs));
  const int M = static_cast<int>(s.machine_tasks.size());
  const int V = M + static_cast<int>(s.transport_tasks.size());
  struct Edge {
    int from, to;
    Time delay;
  };
  std::vector<Edge> edges;
  std::vector<Time> floor(V, 0);
  auto duration = [&](int v) {
    return v < M ? s.machine_tasks[v].end - s.machine_tasks[v].start : s.transport_tasks[v - M].end - s.transport_tasks[v - M].start;
  };

  // job chains
  const int N = static_cast<int>(inst.jobs.size());
  std::vector<std::vector<int>> op_node(N), tr_node(N);
  for (int j = 0; j < N; ++j) {
    op_node[j].assign(inst.jobs[j].operations.size(), -1);
    tr_node[j].assign(transition_count(inst, j), -1);
  }
  for (int k = 0; k < M; ++k) op_node[s.machine_tasks[k].job][s.machine_tasks[k].position] = k;
  for (int k = 0; k < V - M; ++k)
    if (const auto& p = s.transport_tasks[k].payload) tr_node[p->job][p->transition] = M + k;
  for (int j = 0; j < N; ++j)
    for (int t = 0; t < transition_count(inst, j); ++t) {
      const int tr = tr_node[j][t];
      const int before = t > 0 ? op_node[j][t - 1] : -1;
      const int after = t < static_cast<int>(op_node[j].size()) ? op_node[j][t] : -1;
      if (tr >= 0 && before >= 0) edges.push_back({before, tr, duration(before)});
      if (tr >= 0 && after >= 0) edges.push_back({tr, after, duration(tr)});
      if (tr < 0 && before >= 0 && after >= 0) edges.push_back({before, after, duration(before)});
    }

  // machine orders
  std::vector<std::vector<int>> per_machine(inst.machines);
  for (int k = 0; k < M; ++k) per_machine[s.machine_tasks[k].machine].push_back(k);
  for (auto& ids : per_machine) {
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
      return std::tie(s.machine_tasks[a].start, s.machine_tasks[a].end) < std::tie(s.machine_tasks[b].start, s.machine_tasks[b].end);
    });
    for (std::size_t x = 0; x + 1 < ids.size(); ++x) edges.push_back({ids[x], ids[x + 1], duration(ids[x])});
  }

  // AGV sequences
  std::vector<std::vector<int>> per_agv(inst.agv_count);
  for (int k = 0; k < V - M; ++k) per_agv[s.transport_tasks[k].agv].push_back(k);
  for (auto& ids : per_agv) {
    const auto order = agv_task_order(s.transport_tasks, ids, inst.distances);
    if (!order.empty() && opts.agv_initial_at_start)
      floor[M + order.front()] = inst.distances(inst.start_location, s.transport_tasks[order.front()].from);
    for (std::size_t x = 0; x + 1 < order.size(); ++x) {
      const auto &a = s.transport_tasks[order[x]], &b = s.transport_tasks[order[x + 1]];
      edges.push_back({M + order[x], M + order[x + 1], duration(M + order[x]) + inst.distances(a.to, b.from)});
    }
  }

  // Longest paths from time zero; the input is a witness that no positive cycle exists.
  std::vector<Time> start = floor;
  for (int round = 0; round <= V; ++round) {
    bool changed = false;
    for (const auto& e : edges)
      if (start[e.from] + e.delay > start[e.to]) {
        start[e.to] = start[e.from] + e.delay;
        changed = true;
      }
    if (!changed) break;
    if (round == V) throw std::logic_error("precedence cycle while compacting");
  }

  Schedule out = s;
  for (int k = 0; k < M; ++k) {
    out.machine_tasks[k].end = start[k] + duration(k);
    out.machine_tasks[k].start = start[k];
  }
  for (int k = 0; k < V - M; ++k) {
    out.transport_tasks[k].end = start[M + k] + duration(M + k);
    out.transport_tasks[k].start = start[M + k];
  }
  out.makespan = makespan(out);
  return out;
}

}  // namespace agvjsp::qubo
