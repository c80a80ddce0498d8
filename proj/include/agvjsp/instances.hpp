#pragma once

// Reference and generated instances.

#include <cstdint>
#include <random>
#include <vector>

#include "agvjsp/core.hpp"

namespace agvjsp {

/// Bounds for randomly generated instances small enough for exhaustive search.
struct MicroInstanceSpec {
  int max_jobs = 3;
  int max_ops_per_job = 3;
  int max_machines = 3;
  Time max_distance = 3;
  Time max_duration = 3;
  int agv_count = 1;
  std::uint64_t seed = 0;
};

/// Locations Start, M0..M(m-1), Target in that id order.
inline std::vector<Location> standard_locations(int machines) {
  std::vector<Location> locs;
  locs.push_back({0, LocationKind::start, std::nullopt});
  for (int m = 0; m < machines; ++m) locs.push_back({m + 1, LocationKind::machine, m});
  locs.push_back({machines + 1, LocationKind::target, std::nullopt});
  return locs;
}

inline Instance make_instance(int machines, int agvs, const std::vector<std::vector<std::pair<int, Time>>>& jobs,
                              DistanceMatrix distances) {
  Instance inst;
  inst.machines = machines;
  inst.agv_count = agvs;
  inst.locations = standard_locations(machines);
  inst.start_location = 0;
  inst.target_location = machines + 1;
  inst.distances = std::move(distances);
  for (int j = 0; j < static_cast<int>(jobs.size()); ++j) {
    Job job{j, {}};
    for (int p = 0; p < static_cast<int>(jobs[j].size()); ++p)
      job.operations.push_back({j, p, jobs[j][p].first, jobs[j][p].second});
    inst.jobs.push_back(std::move(job));
  }
  return inst;
}

inline DistanceMatrix uniform_distances(int locations, Time d) {
  DistanceMatrix m(locations, d);
  for (int p = 0; p < locations; ++p) m(p, p) = 0;
  return m;
}

/// 2 machines, jobs [(M0,2),(M1,2)] and [(M1,2),(M0,2)], one AGV, unit distances.
inline Instance micro1(int agvs = 1) {
  return make_instance(2, agvs, {{{0, 2}, {1, 2}}, {{1, 2}, {0, 2}}}, uniform_distances(4, 1));
}

/// Random symmetric weights in [1, max_distance] closed under shortest paths,
/// so the result is a metric with positive off-diagonal entries.
inline DistanceMatrix random_metric(int locations, Time max_distance, std::mt19937_64& rng) {
  std::uniform_int_distribution<Time> dist(1, std::max<Time>(1, max_distance));
  DistanceMatrix m(locations, 0);
  for (int p = 0; p < locations; ++p)
    for (int q = p + 1; q < locations; ++q) m(p, q) = m(q, p) = dist(rng);
  for (int r = 0; r < locations; ++r)
    for (int p = 0; p < locations; ++p)
      for (int q = 0; q < locations; ++q) m(p, q) = std::min(m(p, q), m(p, r) + m(r, q));
  return m;
}

/// Machine route of one job; consecutive operations never share a machine.
inline std::vector<int> random_route(int ops, int machines, std::mt19937_64& rng) {
  std::vector<int> route;
  std::uniform_int_distribution<int> pick(0, machines - 1);
  for (int p = 0; p < ops; ++p) {
    int m = pick(rng);
    while (machines > 1 && !route.empty() && m == route.back()) m = pick(rng);
    route.push_back(m);
  }
  return route;
}

inline Instance random_micro_instance(const MicroInstanceSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int machines = uniform(1, spec.max_machines);
  const int jobs = uniform(1, spec.max_jobs);
  std::vector<std::vector<std::pair<int, Time>>> spec_jobs;
  for (int j = 0; j < jobs; ++j) {
    const int ops = machines == 1 ? 1 : uniform(1, spec.max_ops_per_job);
    std::vector<std::pair<int, Time>> job;
    for (int m : random_route(ops, machines, rng))
      job.push_back({m, std::uniform_int_distribution<Time>(1, spec.max_duration)(rng)});
    spec_jobs.push_back(job);
  }
  return make_instance(machines, spec.agv_count, spec_jobs, random_metric(machines + 2, spec.max_distance, rng));
}

/// 4 machines, 4 jobs of 6 operations, 2 AGVs, 6 locations.
inline Instance set6_shaped_instance(std::uint64_t seed = 6, Time max_duration = 5, Time max_distance = 3) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::pair<int, Time>>> jobs;
  for (int j = 0; j < 4; ++j) {
    std::vector<std::pair<int, Time>> job;
    for (int m : random_route(6, 4, rng)) job.push_back({m, std::uniform_int_distribution<Time>(1, max_duration)(rng)});
    jobs.push_back(job);
  }
  return make_instance(4, 2, jobs, random_metric(6, max_distance, rng));
}

}  // namespace agvjsp
