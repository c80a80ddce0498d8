#pragma once

// Time-indexed QUBO for the job shop with AGV transport.
//
// Variables: x(i, t) = 1 iff operation i starts at t, for 0 <= t < T, over
// standard (machine) operations followed by walking operations; then the
// objective block U_0..U_T, exactly one of which marks the makespan.
//
// Every transport between consecutive chain steps is a parent group of B
// walking operations, one per AGV; exactly one of them is picked.
//
//   h1  each standard operation starts exactly once
//   h2  no two operations overlap on a machine
//   h3  consecutive operations of a job keep their order
//   h4  exactly one U_t is set
//   h5  no operation ends after the U mark
//   h6  each parent group picks exactly one walking operation and start
//   h7  an AGV has time to travel empty between its walking operations
//   h8  a standard operation starts after its delivery finishes
//   h9  a walking operation starts after the operation it collects finishes
//   o   sum t * U_t
//
// H = alpha * (h1 + ... + h9) + o, with integer coefficients.

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "agvjsp/core.hpp"

namespace agvjsp::qubo {

using Coefficient = std::int64_t;
using BitVector = std::vector<std::uint8_t>;

struct QuboBuildConfig {
  Time horizon = 1;
  Coefficient alpha = 4;
  bool start_target_transports = true;

  /// alpha = 2 (T + 1): one unit of violation outweighs the whole objective range.
  static Coefficient default_alpha(Time horizon) { return 2 * (horizon + 1); }
};

// ---------------------------------------------------------------------------
// Operation table

struct StandardOp {
  int job = 0;
  int position = 0;
  int machine = 0;
  Time duration = 1;
  std::optional<int> omega;  // parent group delivering this operation's workpiece
};

/// xi = (agv, duration, source location, destination location)
struct WalkingOp {
  int agv = 0;
  Time duration = 0;
  int source = 0;
  int destination = 0;
  int group = 0;
};

struct ParentGroup {
  int job = 0;
  int transition = 0;
  std::vector<int> members;  // global operation indices, one per AGV
  std::optional<int> phi;    // standard operation the workpiece leaves
};

struct OperationTable {
  std::vector<StandardOp> standard;
  std::vector<WalkingOp> walking;
  std::vector<ParentGroup> groups;
  std::vector<std::vector<int>> per_machine;  // I_m
  std::vector<std::vector<int>> per_agv;      // I_b, global indices
  std::vector<int> last_of_job;               // k_n
  int agv_count = 1;

  int standard_count() const { return static_cast<int>(standard.size()); }
  int total() const { return static_cast<int>(standard.size() + walking.size()); }
  bool is_walking(int op) const { return op >= standard_count(); }
  const WalkingOp& walk(int op) const { return walking[op - standard_count()]; }

  Time duration(int op) const { return is_walking(op) ? walk(op).duration : standard[op].duration; }

  /// Omega_i: walking operations that may deliver standard operation i.
  std::vector<int> omega(int op) const {
    if (!standard[op].omega) return {};
    return groups[*standard[op].omega].members;
  }

  /// Phi_i: standard operation preceding walking operation i, if any.
  std::optional<int> phi(int op) const { return groups[walk(op).group].phi; }

  int standard_index(int job, int position) const {
    for (int i = 0; i < standard_count(); ++i)
      if (standard[i].job == job && standard[i].position == position) return i;
    return -1;
  }
  int group_index(int job, int transition) const {
    for (int g = 0; g < static_cast<int>(groups.size()); ++g)
      if (groups[g].job == job && groups[g].transition == transition) return g;
    return -1;
  }
};

inline OperationTable enumerate_operations(const Instance& inst, const QuboBuildConfig& config) {
  OperationTable table;
  table.agv_count = inst.agv_count;
  table.per_machine.resize(inst.machines);
  table.per_agv.resize(inst.agv_count);
  const ModelOptions model{config.start_target_transports, false};
  for (const auto& job : inst.jobs) {
    for (const auto& op : job.operations) {
      table.per_machine[op.machine].push_back(static_cast<int>(table.standard.size()));
      table.standard.push_back({job.id, op.position, op.machine, op.duration, std::nullopt});
    }
    table.last_of_job.push_back(static_cast<int>(table.standard.size()) - 1);
  }
  const int I = table.standard_count();
  int first_of_job = 0;
  for (const auto& job : inst.jobs) {
    const int k = static_cast<int>(job.operations.size());
    for (int t = 0; t <= k; ++t) {
      if (!transition_modelled(inst, job.id, t, model)) continue;
      const int g = static_cast<int>(table.groups.size());
      ParentGroup group{job.id, t, {}, std::nullopt};
      if (t > 0) group.phi = first_of_job + t - 1;
      if (t < k) table.standard[first_of_job + t].omega = g;
      auto [from, to] = transition_endpoints(inst, job.id, t);
      for (int b = 0; b < inst.agv_count; ++b) {
        const int op = I + static_cast<int>(table.walking.size());
        table.walking.push_back({b, inst.distances(from, to), from, to, g});
        table.per_agv[b].push_back(op);
        group.members.push_back(op);
      }
      table.groups.push_back(std::move(group));
    }
    first_of_job += k;
  }
  return table;
}

// ---------------------------------------------------------------------------
// Variable indexing

class VariableIndexer {
 public:
  VariableIndexer(int operations, Time horizon) : ops_(operations), horizon_(horizon) {}

  std::size_t x(int op, Time t) const { return static_cast<std::size_t>(op) * horizon_ + t; }
  std::size_t u(Time t) const { return static_cast<std::size_t>(ops_) * horizon_ + t; }
  std::size_t size() const { return static_cast<std::size_t>(ops_) * horizon_ + horizon_ + 1; }
  Time horizon() const { return horizon_; }
  int operations() const { return ops_; }

  struct Label {
    bool is_u = false;
    int op = -1;
    Time t = 0;
  };
  Label label(std::size_t index) const {
    const std::size_t xs = static_cast<std::size_t>(ops_) * horizon_;
    if (index >= xs) return {true, -1, static_cast<Time>(index - xs)};
    return {false, static_cast<int>(index / horizon_), static_cast<Time>(index % horizon_)};
  }

 private:
  int ops_;
  Time horizon_;
};

// ---------------------------------------------------------------------------
// Matrix

class QuboMatrix {
 public:
  struct Entry {
    std::size_t row = 0;
    std::size_t col = 0;
    Coefficient value = 0;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  QuboMatrix() = default;
  /// Entries in any order; duplicates are summed, (j, i) folded onto (i, j), zeros dropped.
  QuboMatrix(std::size_t n, std::vector<Entry> entries, Coefficient constant) : n_(n), constant_(constant) {
    for (auto& e : entries) {
      if (e.row > e.col) std::swap(e.row, e.col);
      if (e.col >= n) throw std::out_of_range("QUBO entry index out of range");
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return std::tie(a.row, a.col) < std::tie(b.row, b.col); });
    for (const auto& e : entries) {
      if (!entries_.empty() && entries_.back().row == e.row && entries_.back().col == e.col)
        entries_.back().value += e.value;
      else
        entries_.push_back(e);
    }
    std::erase_if(entries_, [](const Entry& e) { return e.value == 0; });
    index();
  }

  std::size_t size() const { return n_; }
  Coefficient constant() const { return constant_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t nonzeros() const { return entries_.size(); }
  Coefficient diagonal(std::size_t i) const { return diag_[i]; }

  struct Neighbor {
    std::size_t index;
    Coefficient value;
  };
  /// Off-diagonal couplings of variable i, in both directions.
  std::pair<const Neighbor*, const Neighbor*> neighbors(std::size_t i) const {
    return {adj_.data() + start_[i], adj_.data() + start_[i + 1]};
  }

  Coefficient max_abs_coefficient() const {
    Coefficient m = 0;
    for (const auto& e : entries_) m = std::max(m, e.value < 0 ? -e.value : e.value);
    return m;
  }

  friend bool operator==(const QuboMatrix& a, const QuboMatrix& b) {
    return a.n_ == b.n_ && a.constant_ == b.constant_ && a.entries_ == b.entries_;
  }

 private:
  void index() {
    diag_.assign(n_, 0);
    std::vector<std::size_t> deg(n_ + 1, 0);
    for (const auto& e : entries_) {
      if (e.row == e.col) {
        diag_[e.row] = e.value;
      } else {
        ++deg[e.row];
        ++deg[e.col];
      }
    }
    start_.assign(n_ + 1, 0);
    for (std::size_t i = 0; i < n_; ++i) start_[i + 1] = start_[i] + deg[i];
    adj_.assign(start_[n_], {0, 0});
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (const auto& e : entries_)
      if (e.row != e.col) {
        adj_[fill[e.row]++] = {e.col, e.value};
        adj_[fill[e.col]++] = {e.row, e.value};
      }
  }

  std::size_t n_ = 0;
  Coefficient constant_ = 0;
  std::vector<Entry> entries_;
  std::vector<Coefficient> diag_;
  std::vector<std::size_t> start_{0};
  std::vector<Neighbor> adj_;
};

/// Accumulates terms before freezing them into a QuboMatrix.
class QuboTerms {
 public:
  explicit QuboTerms(std::size_t n = 0) : n_(n) {}

  void add(std::size_t i, std::size_t j, Coefficient c) {
    if (c == 0) return;
    if (i > j) std::swap(i, j);
    terms_[i * n_ + j] += c;
  }
  void add_linear(std::size_t i, Coefficient c) { add(i, i, c); }
  void add_constant(Coefficient c) { constant_ += c; }

  /// Adds (sum of vars - 1)^2 with b^2 = b: -1 per variable, +2 per pair, +1 constant.
  void add_exactly_one(const std::vector<std::size_t>& vars, Coefficient weight = 1) {
    for (std::size_t a = 0; a < vars.size(); ++a) {
      add_linear(vars[a], -weight);
      for (std::size_t b = a + 1; b < vars.size(); ++b) add(vars[a], vars[b], 2 * weight);
    }
    add_constant(weight);
  }

  void merge(const QuboTerms& other, Coefficient scale = 1) {
    for (const auto& [k, v] : other.terms_) terms_[k] += scale * v;
    constant_ += scale * other.constant_;
  }

  std::size_t size() const { return n_; }
  Coefficient constant() const { return constant_; }

  QuboMatrix freeze() const {
    std::vector<QuboMatrix::Entry> entries;
    entries.reserve(terms_.size());
    for (const auto& [k, v] : terms_)
      if (v != 0) entries.push_back({k / n_, k % n_, v});
    return QuboMatrix(n_, std::move(entries), constant_);
  }

 private:
  std::size_t n_;
  std::unordered_map<std::size_t, Coefficient> terms_;
  Coefficient constant_ = 0;
};


// ---------------------------------------------------------------------------
// Penalty terms. Each builder returns its family unweighted.

enum class Term { h1 = 1, h2, h3, h4, h5, h6, h7, h8, h9 };
inline constexpr std::array<Term, 9> kAllTerms{Term::h1, Term::h2, Term::h3, Term::h4, Term::h5,
                                               Term::h6, Term::h7, Term::h8, Term::h9};

inline std::string to_string(Term t) { return "h" + std::to_string(static_cast<int>(t)); }

/// Operation table plus indexing for one (instance, config) pair.
struct Model {
  const Instance* instance = nullptr;
  OperationTable table;
  QuboBuildConfig config;
  VariableIndexer indexer{0, 1};
};

/// Longest job chain: no horizon below it admits a feasible encoding.
inline Time minimum_horizon(const Instance& inst, bool start_target_transports) {
  Time longest = 0;
  const ModelOptions model{start_target_transports, false};
  for (int j = 0; j < static_cast<int>(inst.jobs.size()); ++j) longest = std::max(longest, chain_length(inst, j, model));
  return longest;
}

inline Model make_model(const Instance& inst, const QuboBuildConfig& config) {
  if (const auto vs = validate_instance(inst); !vs.empty()) throw std::invalid_argument("invalid instance: " + describe(vs));
  if (config.horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  if (config.alpha < 1) throw std::invalid_argument("penalty weight must be at least 1");
  const Time need = minimum_horizon(inst, config.start_target_transports);
  if (config.horizon < need)
    throw std::invalid_argument("horizon " + std::to_string(config.horizon) + " is shorter than the longest job chain (" +
                                std::to_string(need) + "); no schedule fits");
  Model m;
  m.instance = &inst;
  m.config = config;
  m.table = enumerate_operations(inst, config);
  m.indexer = VariableIndexer(m.table.total(), config.horizon);
  return m;
}

namespace detail {

inline std::vector<std::size_t> time_vars(const Model& m, int op) {
  std::vector<std::size_t> v;
  for (Time t = 0; t < m.indexer.horizon(); ++t) v.push_back(m.indexer.x(op, t));
  return v;
}

/// x(i, t) x(k, t2) * max(t2 + p_k - t, 0): i may not start before k ends.
inline void add_after(QuboTerms& q, const Model& m, int i, int k) {
  const Time T = m.indexer.horizon();
  for (Time t = 0; t < T; ++t)
    for (Time t2 = 0; t2 < T; ++t2) {
      const Time c = t2 + m.table.duration(k) - t;
      if (c > 0) q.add(m.indexer.x(i, t), m.indexer.x(k, t2), c);
    }
}

}  // namespace detail

/// h1, h6 and h4.
inline QuboTerms build_onehot_penalties(const Model& m, bool h1 = true, bool h6 = true, bool h4 = true) {
  QuboTerms q(m.indexer.size());
  if (h1)
    for (int i = 0; i < m.table.standard_count(); ++i) q.add_exactly_one(detail::time_vars(m, i));
  if (h6)
    for (const auto& g : m.table.groups) {
      std::vector<std::size_t> vars;
      for (int op : g.members)
        for (auto v : detail::time_vars(m, op)) vars.push_back(v);
      q.add_exactly_one(vars);
    }
  if (h4) {
    std::vector<std::size_t> us;
    for (Time t = 0; t <= m.indexer.horizon(); ++t) us.push_back(m.indexer.u(t));
    q.add_exactly_one(us);
  }
  return q;
}

/// h2: i' starting while i runs on the same machine, 0 <= t' - t < p_i.
inline QuboTerms build_overlap_penalty(const Model& m) {
  QuboTerms q(m.indexer.size());
  const Time T = m.indexer.horizon();
  for (const auto& ops : m.table.per_machine)
    for (int i : ops)
      for (int k : ops) {
        if (i == k) continue;
        for (Time t = 0; t < T; ++t)
          for (Time t2 = t; t2 < std::min(T, t + m.table.duration(i)); ++t2) q.add(m.indexer.x(i, t), m.indexer.x(k, t2), 1);
      }
  return q;
}

/// h3: consecutive operations of one job, t + p_i > t'.
inline QuboTerms build_job_precedence_penalty(const Model& m) {
  QuboTerms q(m.indexer.size());
  const Time T = m.indexer.horizon();
  const auto& st = m.table.standard;
  for (int i = 0; i + 1 < m.table.standard_count(); ++i) {
    if (st[i].job != st[i + 1].job) continue;
    for (Time t = 0; t < T; ++t)
      for (Time t2 = 0; t2 < std::min(T, t + st[i].duration); ++t2) q.add(m.indexer.x(i, t), m.indexer.x(i + 1, t2), 1);
  }
  return q;
}

/// h5: x(i, t1) U(t2) whenever t1 + p_i > t2, over every operation.
inline QuboTerms build_upper_bound_penalty(const Model& m) {
  QuboTerms q(m.indexer.size());
  const Time T = m.indexer.horizon();
  for (int i = 0; i < m.table.total(); ++i)
    for (Time t1 = 0; t1 < T; ++t1)
      for (Time t2 = 0; t2 <= T && t2 < t1 + m.table.duration(i); ++t2) q.add(m.indexer.x(i, t1), m.indexer.u(t2), 1);
  return q;
}

/// o: sum of t * U_t.
inline QuboTerms objective_terms(const Model& m) {
  QuboTerms q(m.indexer.size());
  for (Time t = 1; t <= m.indexer.horizon(); ++t) q.add_linear(m.indexer.u(t), t);
  return q;
}

/// h5 plus the objective; only h5 is scaled by alpha.
inline QuboTerms build_upper_bound_terms(const Model& m, Coefficient alpha) {
  QuboTerms q(m.indexer.size());
  q.merge(build_upper_bound_penalty(m), alpha);
  q.merge(objective_terms(m));
  return q;
}

/// h7: walking operations i, i' of one AGV with t' > t are weighted by
/// max(t + p_i + w(me_i, ms_i') - t', 0). Two walks starting together are
/// weighted by the smaller overlap of the two possible orders, so they are
/// free only when both orders fit.
inline QuboTerms build_agv_transition_penalty(const Model& m) {
  QuboTerms q(m.indexer.size());
  const Time T = m.indexer.horizon();
  const auto& d = m.instance->distances;
  for (const auto& ops : m.table.per_agv)
    for (std::size_t a = 0; a < ops.size(); ++a)
      for (std::size_t b = 0; b < ops.size(); ++b) {
        if (a == b) continue;
        const int i = ops[a], k = ops[b];
        const auto &wi = m.table.walk(i), &wk = m.table.walk(k);
        const Time reach_ik = wi.duration + d(wi.destination, wk.source);
        for (Time t = 0; t < T; ++t) {
          for (Time t2 = t + 1; t2 < std::min(T, t + reach_ik); ++t2)
            q.add(m.indexer.x(i, t), m.indexer.x(k, t2), t + reach_ik - t2);
          if (a < b) {
            const Time reach_ki = wk.duration + d(wk.destination, wi.source);
            q.add(m.indexer.x(i, t), m.indexer.x(k, t), std::min(reach_ik, reach_ki));
          }
        }
      }
  return q;
}

/// h8 (delivery before operation) and h9 (operation before pickup).
inline QuboTerms build_transport_precedence_penalties(const Model& m, bool h8 = true, bool h9 = true) {
  QuboTerms q(m.indexer.size());
  if (h8)
    for (int i = 0; i < m.table.standard_count(); ++i)
      for (int w : m.table.omega(i)) detail::add_after(q, m, i, w);
  if (h9)
    for (int w = m.table.standard_count(); w < m.table.total(); ++w)
      if (const auto phi = m.table.phi(w)) detail::add_after(q, m, w, *phi);
  return q;
}

inline QuboTerms penalty_terms(const Model& m, Term term) {
  switch (term) {
    case Term::h1: return build_onehot_penalties(m, true, false, false);
    case Term::h2: return build_overlap_penalty(m);
    case Term::h3: return build_job_precedence_penalty(m);
    case Term::h4: return build_onehot_penalties(m, false, false, true);
    case Term::h5: return build_upper_bound_penalty(m);
    case Term::h6: return build_onehot_penalties(m, false, true, false);
    case Term::h7: return build_agv_transition_penalty(m);
    case Term::h8: return build_transport_precedence_penalties(m, true, false);
    case Term::h9: return build_transport_precedence_penalties(m, false, true);
  }
  return QuboTerms(m.indexer.size());
}

/// H = alpha * (h1 + ... + h9) + o.
inline QuboMatrix assemble_hamiltonian(const Model& m) {
  QuboTerms q(m.indexer.size());
  q.merge(build_onehot_penalties(m), m.config.alpha);
  q.merge(build_overlap_penalty(m), m.config.alpha);
  q.merge(build_job_precedence_penalty(m), m.config.alpha);
  q.merge(build_upper_bound_terms(m, m.config.alpha));
  q.merge(build_agv_transition_penalty(m), m.config.alpha);
  q.merge(build_transport_precedence_penalties(m), m.config.alpha);
  return q.freeze();
}

inline QuboMatrix assemble_hamiltonian(const Instance& inst, const QuboBuildConfig& config) {
  return assemble_hamiltonian(make_model(inst, config));
}

// ---------------------------------------------------------------------------
// Energy

inline Coefficient evaluate_energy(const QuboMatrix& q, const BitVector& x) {
  if (x.size() != q.size())
    throw std::invalid_argument("bit vector has " + std::to_string(x.size()) + " entries, matrix has " + std::to_string(q.size()));
  Coefficient e = q.constant();
  for (const auto& entry : q.entries())
    if (x[entry.row] && x[entry.col]) e += entry.value;
  return e;
}

/// Unweighted value of each penalty family on x, indexed by Term - 1.
inline std::array<Coefficient, 9> term_energies(const Model& m, const BitVector& x) {
  std::array<Coefficient, 9> out{};
  for (Term t : kAllTerms) out[static_cast<int>(t) - 1] = evaluate_energy(penalty_terms(m, t).freeze(), x);
  return out;
}

// ---------------------------------------------------------------------------
// Text format: "QUBO 1 <n> <nnz> <constant>" then "i j c" per nonzero.

inline void export_qubo(const QuboMatrix& q, std::ostream& out) {
  out << "QUBO 1 " << q.size() << ' ' << q.nonzeros() << ' ' << q.constant() << '\n';
  for (const auto& e : q.entries()) out << e.row << ' ' << e.col << ' ' << e.value << '\n';
}

inline std::string export_qubo(const QuboMatrix& q) {
  std::ostringstream os;
  export_qubo(q, os);
  return os.str();
}

inline QuboMatrix import_qubo(std::istream& in) {
  std::string magic;
  int version = 0;
  std::size_t n = 0, nnz = 0;
  Coefficient constant = 0;
  if (!(in >> magic >> version >> n >> nnz >> constant) || magic != "QUBO" || version != 1)
    throw std::runtime_error("not a version 1 QUBO file");
  std::vector<QuboMatrix::Entry> entries(nnz);
  for (auto& e : entries) {
    if (!(in >> e.row >> e.col >> e.value)) throw std::runtime_error("QUBO file truncated");
    if (e.row > e.col) throw std::runtime_error("QUBO entry below the diagonal");
  }
  return QuboMatrix(n, std::move(entries), constant);
}

inline QuboMatrix import_qubo(const std::string& text) {
  std::istringstream is(text);
  return import_qubo(is);
}

}  // namespace agvjsp::qubo
