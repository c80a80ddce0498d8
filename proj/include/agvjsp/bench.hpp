#pragma once

// Benchmark table over a directory of instance files.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "agvjsp/cp_solver.hpp"
#include "agvjsp/io.hpp"
#include "agvjsp/qubo_heuristics.hpp"
#include "agvjsp/qubo_model.hpp"

namespace agvjsp::bench {

/// "#machines x #jobs x #operations x #AGVs"
inline std::string size_string(const Instance& inst) {
  return std::to_string(inst.machines) + "x" + std::to_string(inst.jobs.size()) + "x" +
         std::to_string(inst.operation_count()) + "x" + std::to_string(inst.agv_count);
}

struct Options {
  std::vector<std::string> backends{"cp"};
  cp::BoundingMode mode = cp::BoundingMode::dichotomous;
  std::int64_t budget_ms = 0;
  std::uint64_t seed = 0;
  bool timing = false;  // wall-clock columns make output run-dependent
};

struct Row {
  std::string id;
  std::string size;
  std::string backend;
  std::string mode;
  std::optional<Time> makespan;
  std::optional<qubo::Coefficient> energy;
  bool optimal = false;
  double time_to_best_ms = 0;
  std::optional<double> time_to_proof_ms;
  std::string error;
};

inline Row run_one(const std::string& id, const Instance& inst, const std::string& backend, const Options& opts) {
  Row row{id, size_string(inst), backend, "-", std::nullopt, std::nullopt, false, 0, std::nullopt, ""};
  try {
    if (backend == "cp") {
      cp::SolveOptions so;
      so.mode = opts.mode;
      so.time_budget_ms = opts.budget_ms;
      const auto r = cp::solve(inst, so);
      row.mode = cp::to_string(opts.mode);
      row.makespan = r.schedule.makespan;
      row.optimal = r.optimal;
      row.time_to_best_ms = r.stats.time_to_incumbent_ms;
      if (r.optimal) row.time_to_proof_ms = r.stats.time_total_ms;
    } else if (backend == "tabu" || backend == "anneal") {
      const auto start = std::chrono::steady_clock::now();
      qubo::QuboBuildConfig c;
      c.horizon = cp::initial_bounds(inst).upper + 1;
      c.alpha = qubo::QuboBuildConfig::default_alpha(c.horizon);
      const auto m = qubo::make_model(inst, c);
      const auto q = qubo::assemble_hamiltonian(m);
      qubo::MinimizerResult r;
      if (backend == "tabu") {
        qubo::TabuConfig t;
        t.seed = opts.seed;
        r = qubo::tabu_search(q, t);
      } else {
        qubo::AnnealConfig a;
        a.seed = opts.seed;
        r = qubo::simulated_annealing(q, a);
      }
      row.energy = r.energy;
      const auto d = qubo::decode_bits(m, q, r.bits);
      if (d.schedule) row.makespan = qubo::compact_gaps(inst, *d.schedule, qubo::decode_options(c)).makespan;
      else row.error = "infeasible";
      row.time_to_best_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    } else {
      row.error = "unknown backend";
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

/// Every *.json instance in `dir`, sorted by file name, against every backend.
inline std::vector<Row> run(const std::filesystem::path& dir, const Options& opts) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<Row> rows;
  for (const auto& f : files) {
    std::optional<Instance> inst;
    try {
      inst = load_instance(f.string());
    } catch (const std::exception& e) {
      for (const auto& b : opts.backends) rows.push_back({f.stem().string(), "-", b, "-", {}, {}, false, 0, {}, e.what()});
      continue;
    }
    for (const auto& b : opts.backends) rows.push_back(run_one(f.stem().string(), *inst, b, opts));
  }
  return rows;
}

inline json to_json(const std::vector<Row>& rows, bool timing) {
  json out = json::array();
  for (const auto& r : rows) {
    json o = {{"id", r.id}, {"size", r.size}, {"backend", r.backend}, {"mode", r.mode}, {"optimal", r.optimal}};
    o["makespan"] = r.makespan ? json(*r.makespan) : json(nullptr);
    o["energy"] = r.energy ? json(*r.energy) : json(nullptr);
    if (timing) {
      o["time_to_best_ms"] = r.time_to_best_ms;
      o["time_to_proof_ms"] = r.time_to_proof_ms ? json(*r.time_to_proof_ms) : json(nullptr);
    }
    if (!r.error.empty()) o["error"] = r.error;
    out.push_back(o);
  }
  return out;
}

inline std::string to_text(const std::vector<Row>& rows, bool timing) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> head{"id", "size", "backend", "mode", "makespan", "optimal", "energy"};
  if (timing) {
    head.push_back("best_ms");
    head.push_back("proof_ms");
  }
  head.push_back("note");
  cells.push_back(head);
  auto ms = [](double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(1) << v;
    return os.str();
  };
  for (const auto& r : rows) {
    std::vector<std::string> c{r.id,
                               r.size,
                               r.backend,
                               r.mode,
                               r.makespan ? std::to_string(*r.makespan) : "-",
                               r.optimal ? "yes" : "no",
                               r.energy ? std::to_string(*r.energy) : "-"};
    if (timing) {
      c.push_back(ms(r.time_to_best_ms));
      c.push_back(r.time_to_proof_ms ? ms(*r.time_to_proof_ms) : "-");
    }
    c.push_back(r.error);
    cells.push_back(c);
  }
  std::vector<std::size_t> width(head.size(), 0);
  for (const auto& c : cells)
    for (std::size_t i = 0; i < c.size(); ++i) width[i] = std::max(width[i], c[i].size());
  std::ostringstream out;
  for (const auto& c : cells) {
    std::string line;
    for (std::size_t i = 0; i < c.size(); ++i) {
      line += c[i];
      if (i + 1 < c.size()) line += std::string(width[i] - c[i].size() + 2, ' ');
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << "\n";
  }
  return out.str();
}

}  // namespace agvjsp::bench
