#include <gtest/gtest.h>

#include <random>

#include "agvjsp/cp_solver.hpp"
#include "agvjsp/instances.hpp"
#include "agvjsp/oracle.hpp"
#include "agvjsp/qubo_heuristics.hpp"
#include "agvjsp/qubo_io.hpp"
#include "agvjsp/qubo_model.hpp"
#include "support.hpp"

using namespace agvjsp;
using namespace agvjsp::qubo;

namespace {

QuboBuildConfig config(Time horizon, bool legs = true, Coefficient alpha = 0) {
  QuboBuildConfig c;
  c.horizon = horizon;
  c.alpha = alpha > 0 ? alpha : QuboBuildConfig::default_alpha(horizon);
  c.start_target_transports = legs;
  return c;
}

Instance one_job(std::vector<std::pair<int, Time>> ops, int agvs = 1, Time d = 1) {
  int machines = 0;
  for (auto [m, p] : ops) machines = std::max(machines, m + 1);
  return make_instance(machines, agvs, {ops}, uniform_distances(machines + 2, d));
}

Coefficient term_value(const Model& m, Term t, const BitVector& x) { return evaluate_energy(penalty_terms(m, t).freeze(), x); }

BitVector bits_at(const Model& m, std::vector<std::pair<int, Time>> starts, std::optional<Time> u = std::nullopt) {
  BitVector x(m.indexer.size(), 0);
  for (auto [op, t] : starts) x[m.indexer.x(op, t)] = 1;
  if (u) x[m.indexer.u(*u)] = 1;
  return x;
}

}  // namespace

TEST(OperationTable, CountsWithoutLegs) {
  const auto inst = one_job({{0, 1}, {1, 1}, {2, 1}}, 2);
  const auto t = enumerate_operations(inst, config(10, false));
  EXPECT_EQ(t.standard_count(), 3);
  EXPECT_EQ(t.groups.size(), 2u);
  EXPECT_EQ(t.walking.size(), 4u);
}

TEST(OperationTable, CountsWithLegs) {
  const auto inst = one_job({{0, 1}, {1, 1}, {2, 1}}, 2);
  const auto t = enumerate_operations(inst, config(10, true));
  EXPECT_EQ(t.standard_count(), 3);
  EXPECT_EQ(t.groups.size(), 4u);
  EXPECT_EQ(t.walking.size(), 8u);
  for (const auto& g : t.groups) EXPECT_EQ(g.members.size(), 2u);
  // the Start leg has no preceding operation, the others do
  EXPECT_FALSE(t.groups[0].phi.has_value());
  for (std::size_t g = 1; g < t.groups.size(); ++g) EXPECT_TRUE(t.groups[g].phi.has_value());
}

TEST(OperationTable, FirstOperationHasNoDeliveryWithoutLegs) {
  const auto inst = one_job({{0, 2}});
  const auto t = enumerate_operations(inst, config(4, false));
  EXPECT_TRUE(t.omega(0).empty());
}

TEST(OperationTable, WalkingDurationsComeFromDistances) {
  auto inst = one_job({{0, 1}, {1, 1}}, 2);
  inst.distances(1, 2) = inst.distances(2, 1) = 2;
  const auto t = enumerate_operations(inst, config(10, true));
  for (const auto& w : t.walking) EXPECT_EQ(w.duration, inst.distances(w.source, w.destination));
}

TEST(Indexer, BijectiveAndSized) {
  VariableIndexer ix(3, 4);
  EXPECT_EQ(ix.size(), 3u * 4 + 5);
  std::vector<int> seen(ix.size(), 0);
  for (int op = 0; op < 3; ++op)
    for (Time t = 0; t < 4; ++t) {
      auto l = ix.label(ix.x(op, t));
      EXPECT_FALSE(l.is_u);
      EXPECT_EQ(l.op, op);
      EXPECT_EQ(l.t, t);
      ++seen[ix.x(op, t)];
    }
  for (Time t = 0; t <= 4; ++t) {
    EXPECT_TRUE(ix.label(ix.u(t)).is_u);
    ++seen[ix.u(t)];
  }
  for (int s : seen) EXPECT_EQ(s, 1);
}

TEST(Matrix, FoldsDuplicatesAndLowerEntries) {
  QuboMatrix q(3, {{2, 0, 1}, {0, 2, 2}, {1, 1, 0}, {1, 1, 4}}, 5);
  ASSERT_EQ(q.nonzeros(), 2u);
  EXPECT_EQ(q.entries()[0], (QuboMatrix::Entry{0, 2, 3}));
  EXPECT_EQ(q.entries()[1], (QuboMatrix::Entry{1, 1, 4}));
  EXPECT_EQ(q.constant(), 5);
}

TEST(OneHot, StandardOperation) {
  const auto inst = one_job({{0, 1}});
  const auto m = make_model(inst, config(2, false));
  EXPECT_EQ(term_value(m, Term::h1, bits_at(m, {{0, 0}})), 0);
  EXPECT_EQ(term_value(m, Term::h1, bits_at(m, {})), 1);
  EXPECT_EQ(term_value(m, Term::h1, bits_at(m, {{0, 0}, {0, 1}})), 1);
}

TEST(OneHot, ParentGroup) {
  const auto inst = one_job({{0, 1}, {1, 1}}, 2);
  const auto m = make_model(inst, config(3, false));
  ASSERT_EQ(m.table.groups.size(), 1u);
  const auto& g = m.table.groups[0];
  EXPECT_EQ(term_value(m, Term::h6, bits_at(m, {{g.members[1], 1}})), 0);
  EXPECT_EQ(term_value(m, Term::h6, bits_at(m, {})), 1);
  EXPECT_EQ(term_value(m, Term::h6, bits_at(m, {{g.members[0], 1}, {g.members[1], 1}})), 1);
}

TEST(Overlap, SameMachineWindows) {
  const auto inst = make_instance(1, 1, {{{0, 2}}, {{0, 2}}}, uniform_distances(3, 1));
  const auto m = make_model(inst, config(6, false));
  EXPECT_EQ(term_value(m, Term::h2, bits_at(m, {{0, 0}, {1, 1}})), 1);
  EXPECT_EQ(term_value(m, Term::h2, bits_at(m, {{0, 0}, {1, 2}})), 0);
  EXPECT_EQ(term_value(m, Term::h2, bits_at(m, {{0, 1}, {1, 1}})), 2);
}

TEST(JobOrder, ConsecutiveOperations) {
  const auto inst = one_job({{0, 2}, {1, 1}});
  const auto m = make_model(inst, config(6, false));
  EXPECT_EQ(term_value(m, Term::h3, bits_at(m, {{0, 0}, {1, 1}})), 1);
  EXPECT_EQ(term_value(m, Term::h3, bits_at(m, {{0, 0}, {1, 2}})), 0);
}

TEST(UpperBound, PenaltyAndObjective) {
  const auto inst = one_job({{0, 2}});
  const auto m = make_model(inst, config(8, false));
  EXPECT_EQ(term_value(m, Term::h5, bits_at(m, {{0, 3}}, 5)), 0);
  EXPECT_EQ(term_value(m, Term::h5, bits_at(m, {{0, 3}}, 4)), 1);
  const auto o = objective_terms(m).freeze();
  EXPECT_EQ(evaluate_energy(o, bits_at(m, {}, 0)), 0);
  EXPECT_EQ(evaluate_energy(o, bits_at(m, {}, 7)), 7);
}

TEST(AgvTransition, EmptyTravelWindow) {
  // Job 0 goes A -> B (duration 2), job 1 leaves from C; d(B, C) = 2.
  Instance inst = make_instance(3, 1, {{{0, 1}, {1, 1}}, {{2, 1}, {0, 1}}}, uniform_distances(5, 2));
  const auto m = make_model(inst, config(12, false));
  const int i = m.table.groups[0].members[0];  // M0 -> M1
  const int k = m.table.groups[1].members[0];  // M2 -> M0
  EXPECT_EQ(m.table.walk(i).duration, 2);
  EXPECT_EQ(term_value(m, Term::h7, bits_at(m, {{i, 0}, {k, 3}})), 1);
  EXPECT_EQ(term_value(m, Term::h7, bits_at(m, {{i, 0}, {k, 4}})), 0);
  EXPECT_EQ(term_value(m, Term::h7, bits_at(m, {{i, 0}, {k, 10}})), 0);
  // two walks starting together can never share one AGV
  EXPECT_GT(term_value(m, Term::h7, bits_at(m, {{i, 2}, {k, 2}})), 0);
}

TEST(TransportPrecedence, DeliveryAndPickup) {
  const auto inst = one_job({{0, 2}, {1, 1}});
  const auto m = make_model(inst, config(8, false));
  const int w = m.table.groups[0].members[0];  // duration 1
  EXPECT_EQ(term_value(m, Term::h8, bits_at(m, {{w, 0}, {1, 1}})), 0);
  EXPECT_EQ(term_value(m, Term::h8, bits_at(m, {{w, 0}, {1, 0}})), 1);
  EXPECT_EQ(term_value(m, Term::h9, bits_at(m, {{0, 0}, {w, 1}})), 1);
  EXPECT_EQ(term_value(m, Term::h9, bits_at(m, {{0, 0}, {w, 2}})), 0);
}

TEST(Hamiltonian, SingleOperationSize) {
  const auto inst = one_job({{0, 1}});
  const auto q = assemble_hamiltonian(inst, config(4, false));
  EXPECT_EQ(q.size(), 9u);
}

TEST(Hamiltonian, ZeroVectorEnergy) {
  for (bool legs : {false, true}) {
    const auto inst = micro1(2);
    const auto m = make_model(inst, config(20, legs));
    const auto q = assemble_hamiltonian(m);
    const Coefficient expected =
        m.config.alpha * (m.table.standard_count() + static_cast<Coefficient>(m.table.groups.size()) + 1);
    EXPECT_EQ(evaluate_energy(q, BitVector(q.size(), 0)), expected);
  }
}

TEST(Hamiltonian, RefusesShortHorizon) {
  const auto inst = micro1();
  EXPECT_THROW(assemble_hamiltonian(inst, config(3)), std::invalid_argument);
}

TEST(Hamiltonian, SetSixShapedBuildIsThousandsOfVariables) {
  const auto inst = set6_shaped_instance();
  const auto b = cp::initial_bounds(inst);
  const auto q = assemble_hamiltonian(inst, config(b.upper + 1));
  EXPECT_GE(q.size(), 1000u);
  EXPECT_EQ(q.size(), static_cast<std::size_t>(24 + 4 * 7 * 2) * (b.upper + 1) + b.upper + 2);
}

TEST(Energy, SimpleCases) {
  QuboMatrix q(2, {{0, 0, 1}, {1, 1, 1}}, 0);
  EXPECT_EQ(evaluate_energy(q, {0, 0}), 0);
  EXPECT_EQ(evaluate_energy(q, {1, 1}), 2);
  EXPECT_THROW(evaluate_energy(q, {1}), std::invalid_argument);
}

TEST(Energy, EncodedOptimumEqualsMakespan) {
  const auto inst = micro1();
  const auto truth = oracle::brute_force_optimal(inst);
  const auto m = make_model(inst, config(cp::initial_bounds(inst).upper + 1));
  const auto q = assemble_hamiltonian(m);
  EXPECT_EQ(evaluate_energy(q, oracle::encode_schedule_to_bits(m, truth.schedule)), truth.makespan);
}

TEST(Export, RoundTrip) {
  EXPECT_EQ(export_qubo(QuboMatrix(0, {}, 0)), "QUBO 1 0 0 0\n");
  EXPECT_EQ(export_qubo(QuboMatrix(2, {{1, 1, -3}, {0, 0, 2}}, 1)), "QUBO 1 2 2 1\n0 0 2\n1 1 -3\n");
  const auto q = assemble_hamiltonian(micro1(2), config(20));
  EXPECT_EQ(import_qubo(export_qubo(q)), q);
  EXPECT_THROW(import_qubo(std::string("QUBO 2 0 0 0\n")), std::runtime_error);
}

TEST(Labels, RoundTrip) {
  const auto inst = micro1();
  const auto m = make_model(inst, config(16));
  const auto back = model_from_labels(inst, json::parse(labels_to_json(m).dump()));
  EXPECT_EQ(back.indexer.size(), m.indexer.size());
  EXPECT_EQ(back.config.alpha, m.config.alpha);
  EXPECT_THROW(model_from_labels(micro1(2), labels_to_json(m)), std::invalid_argument);
}

TEST(Properties, PenaltyZeroIffDecodedFeasible) {
  std::mt19937_64 rng(11);
  for (const auto& b : fixtures::tiny_builds()) {
    const auto m = make_model(b.instance, b.config);
    const auto q = assemble_hamiltonian(m);
    for (int trial = 0; trial < 300; ++trial) {
      // one start per operation keeps a fair share of samples feasible
      BitVector x(q.size(), 0);
      for (int i = 0; i < m.table.total(); ++i)
        if (!m.table.is_walking(i) || m.table.walk(i).agv == 0 || rng() % 2)
          x[m.indexer.x(i, static_cast<Time>(rng() % m.indexer.horizon()))] = 1;
      x[m.indexer.u(static_cast<Time>(rng() % (m.indexer.horizon() + 1)))] = 1;
      if (trial % 3 == 0) x[rng() % x.size()] ^= 1;
      const auto terms = term_energies(m, x);
      bool zero = true;
      for (auto v : terms) zero = zero && v == 0;
      const auto d = decode_bits(m, q, x);
      EXPECT_EQ(zero, d.schedule.has_value()) << b.name;
    }
  }
}

TEST(Properties, JobPermutationPreservesEnergy) {
  const auto inst = micro1(2);
  const auto truth = oracle::brute_force_optimal(inst);
  const auto perm = std::vector<int>{1, 0};
  const auto pinst = permute_jobs(inst, perm);
  const auto cfg = config(cp::initial_bounds(inst).upper + 1);
  const auto m = make_model(inst, cfg);
  const auto pm = make_model(pinst, cfg);
  const auto q = assemble_hamiltonian(m);
  const auto pq = assemble_hamiltonian(pm);
  Schedule s = truth.schedule;
  for (int shift = 0; shift < 3; ++shift) {
    const auto x = oracle::encode_schedule_to_bits(m, s);
    const auto px = oracle::encode_schedule_to_bits(pm, permute_jobs(s, perm));
    EXPECT_EQ(evaluate_energy(q, x), evaluate_energy(pq, px));
    // a corrupted copy must agree too
    auto bad = x;
    bad[m.indexer.x(0, 0)] ^= 1;
    auto pbad = px;
    pbad[pm.indexer.x(pm.table.standard_index(perm[0], 0), 0)] ^= 1;
    EXPECT_EQ(evaluate_energy(q, bad), evaluate_energy(pq, pbad));
    for (auto& t : s.machine_tasks) ++t.start, ++t.end;
    for (auto& t : s.transport_tasks) ++t.start, ++t.end;
    ++s.makespan;
  }
}
