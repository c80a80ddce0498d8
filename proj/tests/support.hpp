#pragma once

// Shared fixtures for the test binaries.

#include <string>
#include <vector>

#include "agvjsp/instances.hpp"
#include "agvjsp/qubo_model.hpp"

namespace agvjsp::fixtures {

/// Seeded micro instance; odd seeds get two AGVs.
inline Instance micro_instance(std::uint64_t seed) {
  MicroInstanceSpec spec;
  spec.seed = seed;
  spec.agv_count = seed % 2 == 0 ? 1 : 2;
  return random_micro_instance(spec);
}

struct TinyBuild {
  std::string name;
  Instance instance;
  qubo::QuboBuildConfig config;
};

/// Builds with at most 22 variables whose horizon admits a feasible schedule.
inline std::vector<TinyBuild> tiny_builds() {
  std::vector<TinyBuild> out;
  auto add = [&](std::string name, Instance inst, Time horizon, bool legs) {
    qubo::QuboBuildConfig c;
    c.horizon = horizon;
    c.alpha = qubo::QuboBuildConfig::default_alpha(horizon);
    c.start_target_transports = legs;
    out.push_back({std::move(name), std::move(inst), c});
  };
  for (Time p = 1; p <= 3; ++p)
    for (Time T = p; T <= p + 2; ++T)
      add("one-op p" + std::to_string(p) + " T" + std::to_string(T), make_instance(1, 1, {{{0, p}}}, uniform_distances(3, 1)), T, false);
  for (Time T = 3; T <= 5; ++T)
    add("one-op with legs T" + std::to_string(T), make_instance(1, 1, {{{0, 1}}}, uniform_distances(3, 1)), T, true);
  for (int agvs = 1; agvs <= 2; ++agvs)
    for (Time T = 3; T <= (agvs == 1 ? 5 : 4); ++T)
      add("two-op B" + std::to_string(agvs) + " T" + std::to_string(T),
          make_instance(2, agvs, {{{0, 1}, {1, 1}}}, uniform_distances(4, 1)), T, false);
  for (Time T = 3; T <= 7; ++T)
    add("shared machine T" + std::to_string(T), make_instance(1, 1, {{{0, 1}}, {{0, 2}}}, uniform_distances(3, 1)), T, false);
  add("parallel machines T2", make_instance(2, 1, {{{0, 2}}, {{1, 1}}}, uniform_distances(4, 1)), 2, false);
  add("two-op distance 2 B1 T4", make_instance(2, 1, {{{0, 1}, {1, 1}}}, uniform_distances(4, 2)), 4, false);
  return out;
}

}  // namespace agvjsp::fixtures
