#include <gtest/gtest.h>

#include <random>

#include "agvjsp/cp_solver.hpp"
#include "agvjsp/instances.hpp"
#include "agvjsp/oracle.hpp"
#include "agvjsp/qubo_heuristics.hpp"
#include "support.hpp"

using namespace agvjsp;
using namespace agvjsp::qubo;

namespace {

QuboMatrix random_matrix(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<Coefficient> coef(-9, 9);
  std::vector<QuboMatrix::Entry> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (rng() % 3 == 0) e.push_back({i, j, coef(rng)});
  return QuboMatrix(n, e, coef(rng));
}

}  // namespace

TEST(FlipDelta, Diagonal) {
  QuboMatrix q(1, {{0, 0, 3}}, 0);
  EXPECT_EQ(flip_delta(q, {0}, 0), 3);
  EXPECT_EQ(flip_delta(q, {1}, 0), -3);
  EXPECT_THROW(flip_delta(q, {0}, 1), std::out_of_range);
}

TEST(FlipDelta, Coupling) {
  QuboMatrix q(2, {{0, 1, 2}}, 0);
  EXPECT_EQ(flip_delta(q, {0, 1}, 0), 2);
}

TEST(FlipDelta, MatchesFullEvaluation) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const auto q = random_matrix(1 + rng() % 12, rng);
    BitVector x(q.size());
    for (auto& b : x) b = rng() % 2;
    const std::size_t i = rng() % q.size();
    auto y = x;
    y[i] ^= 1;
    EXPECT_EQ(flip_delta(q, x, i), evaluate_energy(q, y) - evaluate_energy(q, x));
  }
}

TEST(Annealing, SingleVariable) {
  const auto r = simulated_annealing(QuboMatrix(1, {{0, 0, -5}}, 0));
  EXPECT_EQ(r.bits, BitVector{1});
  EXPECT_EQ(r.energy, -5);
}

TEST(Tabu, SingleVariable) {
  const auto r = tabu_search(QuboMatrix(1, {{0, 0, -5}}, 0));
  EXPECT_EQ(r.bits, BitVector{1});
  EXPECT_EQ(r.energy, -5);
}

TEST(Heuristics, Deterministic) {
  std::mt19937_64 rng(5);
  const auto q = random_matrix(30, rng);
  AnnealConfig a;
  a.seed = 9;
  a.restarts = 2;
  TabuConfig t;
  t.seed = 9;
  t.restarts = 2;
  const auto a1 = simulated_annealing(q, a), a2 = simulated_annealing(q, a);
  const auto t1 = tabu_search(q, t), t2 = tabu_search(q, t);
  EXPECT_EQ(a1.bits, a2.bits);
  EXPECT_EQ(a1.energy, a2.energy);
  EXPECT_EQ(t1.bits, t2.bits);
  EXPECT_EQ(t1.energy, t2.energy);
}

TEST(Heuristics, ReportedEnergyIsTheVectorsEnergy) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const auto q = random_matrix(20, rng);
    const auto a = simulated_annealing(q, {0, 0, 0.1, 100, 1, static_cast<std::uint64_t>(trial)});
    const auto t = tabu_search(q, {0, 0, 1, static_cast<std::uint64_t>(trial)});
    EXPECT_EQ(a.energy, evaluate_energy(q, a.bits));
    EXPECT_EQ(t.energy, evaluate_energy(q, t.bits));
    const auto best = oracle::exhaustive_qubo_minimum(q).energy;
    EXPECT_GE(a.energy, best);
    EXPECT_GE(t.energy, best);
  }
}

TEST(Heuristics, ReachExhaustiveMinimumOnTinyBuilds) {
  for (const auto& b : fixtures::tiny_builds()) {
    const auto q = assemble_hamiltonian(b.instance, b.config);
    const auto best = oracle::exhaustive_qubo_minimum(q).energy;
    AnnealConfig a;
    a.restarts = 10;
    TabuConfig t;
    t.restarts = 10;
    EXPECT_EQ(simulated_annealing(q, a).energy, best) << b.name;
    EXPECT_EQ(tabu_search(q, t).energy, best) << b.name;
  }
}

TEST(Decode, AllZeroVector) {
  const auto inst = micro1();
  QuboBuildConfig c;
  c.horizon = 16;
  c.alpha = QuboBuildConfig::default_alpha(c.horizon);
  const auto m = make_model(inst, c);
  const auto q = assemble_hamiltonian(m);
  const auto d = decode_bits(m, q, BitVector(q.size(), 0));
  EXPECT_FALSE(d.schedule.has_value());
  int h1 = 0, h6 = 0, h4 = 0;
  for (const auto& v : d.violations) {
    h1 += v.term == Term::h1;
    h6 += v.term == Term::h6;
    h4 += v.term == Term::h4;
  }
  EXPECT_EQ(h1, 4);
  EXPECT_EQ(h6, 6);
  EXPECT_EQ(h4, 1);
}

TEST(Decode, DoubleStartIsAnH1Violation) {
  const auto inst = micro1();
  const auto truth = oracle::brute_force_optimal(inst);
  QuboBuildConfig c;
  c.horizon = 16;
  c.alpha = QuboBuildConfig::default_alpha(c.horizon);
  const auto m = make_model(inst, c);
  const auto q = assemble_hamiltonian(m);
  auto x = oracle::encode_schedule_to_bits(m, truth.schedule);
  x[m.indexer.x(0, 15)] = 1;
  const auto d = decode_bits(m, q, x);
  ASSERT_FALSE(d.schedule.has_value());
  ASSERT_EQ(d.violations.size(), 1u);
  EXPECT_EQ(d.violations[0].term, Term::h1);
}

TEST(Compact, ShiftsDelayedOperation) {
  const auto inst = make_instance(1, 1, {{{0, 2}}}, uniform_distances(3, 1));
  Schedule s;
  s.transport_tasks.push_back({0, 1, TransportPayload{0, 0}, 0, 0, 1});
  s.machine_tasks.push_back({0, 0, 0, 3, 5});
  s.transport_tasks.push_back({1, 2, TransportPayload{0, 1}, 0, 5, 6});
  s.makespan = 6;
  const auto c = compact_gaps(inst, s);
  EXPECT_EQ(c.machine_tasks[0].start, 1);
  EXPECT_EQ(c.makespan, 4);
  EXPECT_TRUE(validate_schedule(inst, c).empty());
}

TEST(Compact, OptimalScheduleIsFixedPoint) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = fixtures::micro_instance(seed);
    const auto truth = oracle::brute_force_optimal(inst);
    const auto c = compact_gaps(inst, truth.schedule);
    EXPECT_EQ(c.makespan, truth.makespan);
    EXPECT_TRUE(validate_schedule(inst, c).empty());
    const auto cc = compact_gaps(inst, c);
    EXPECT_EQ(cc, c);
  }
}

TEST(Compact, RejectsInfeasible) {
  const auto inst = micro1();
  Schedule s;
  EXPECT_THROW(compact_gaps(inst, s), std::invalid_argument);
}

TEST(Compact, ImprovesDecodedHeuristicSolutions) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto inst = fixtures::micro_instance(seed);
    QuboBuildConfig c;
    c.horizon = cp::initial_bounds(inst).upper + 1;
    c.alpha = QuboBuildConfig::default_alpha(c.horizon);
    const auto m = make_model(inst, c);
    const auto q = assemble_hamiltonian(m);
    TabuConfig t;
    t.seed = seed;
    const auto r = tabu_search(q, t);
    const auto d = decode_bits(m, q, r.bits);
    if (!d.schedule) continue;
    const auto opts = decode_options(c);
    const auto compacted = compact_gaps(inst, *d.schedule, opts);
    EXPECT_LE(compacted.makespan, d.schedule->makespan);
    EXPECT_TRUE(validate_schedule(inst, compacted, opts).empty());
    EXPECT_EQ(compact_gaps(inst, compacted, opts), compacted);
  }
}
