#pragma once

// Command-line front end. run() is the whole program; main() only forwards.
//
// Exit codes: 0 success, 1 infeasible or invalid result, 2 usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "agvjsp/bench.hpp"
#include "agvjsp/core.hpp"
#include "agvjsp/cp_solver.hpp"
#include "agvjsp/gantt.hpp"
#include "agvjsp/instances.hpp"
#include "agvjsp/io.hpp"
#include "agvjsp/oracle.hpp"
#include "agvjsp/qubo_heuristics.hpp"
#include "agvjsp/qubo_io.hpp"
#include "agvjsp/qubo_model.hpp"

namespace agvjsp::cli {

inline constexpr int kOk = 0;
inline constexpr int kFailed = 1;
inline constexpr int kUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::optional<std::int64_t> auto_or_int(const std::string& value, const char* flag) {
  if (value.empty() || value == "auto") return std::nullopt;
  try {
    std::size_t used = 0;
    const auto v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string(flag) + " expects an integer or 'auto', got '" + value + "'");
  }
}

inline cp::BoundingMode parse_mode(const std::string& m) {
  if (m == "mono" || m == "monotonous") return cp::BoundingMode::monotonous;
  if (m == "dicho" || m == "dichotomous") return cp::BoundingMode::dichotomous;
  throw UsageError("--mode expects mono or dicho, got '" + m + "'");
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-")
    out << text;
  else
    write_text_file(path, text);
}

struct QuboFlags {
  std::string horizon = "auto";
  std::string alpha = "auto";
  bool no_start_target = false;

  qubo::QuboBuildConfig config(const Instance& inst) const {
    qubo::QuboBuildConfig c;
    c.start_target_transports = !no_start_target;
    const ModelOptions model{c.start_target_transports, true};
    const auto h = auto_or_int(horizon, "--horizon");
    c.horizon = h ? *h : cp::initial_bounds(inst, model).upper + 1;
    const auto a = auto_or_int(alpha, "--alpha");
    c.alpha = a ? *a : qubo::QuboBuildConfig::default_alpha(c.horizon);
    return c;
  }
};

inline void add_qubo_flags(CLI::App* cmd, QuboFlags& f) {
  cmd->add_option("--horizon", f.horizon, "planning horizon T, or auto (initial upper bound + 1)");
  cmd->add_option("--alpha", f.alpha, "penalty weight, or auto (2 (T + 1))");
  cmd->add_flag("--no-start-target", f.no_start_target, "do not model the Start and Target transports");
}

struct ScheduleFlags {
  bool no_start_target = false;
  bool free_agv_start = false;
  ModelOptions options() const { return {!no_start_target, !free_agv_start}; }
};

inline void add_schedule_flags(CLI::App* cmd, ScheduleFlags& f) {
  cmd->add_flag("--no-start-target", f.no_start_target, "Start and Target transports are not part of the schedule");
  cmd->add_flag("--free-agv-start", f.free_agv_start, "AGVs may begin anywhere (as in QUBO solutions)");
}

inline std::string summary_text(const Schedule& s, bool optimal, std::optional<Time> lower) {
  std::ostringstream os;
  os << "makespan " << s.makespan << "\n";
  os << "optimal " << (optimal ? "true" : "false") << "\n";
  if (lower) os << "lower_bound " << *lower << "\n";
  return os.str();
}

inline void print_violations(const std::vector<Violation>& vs, std::ostream& out) {
  for (const auto& v : vs) out << v.rule << ": " << v.detail << "\n";
}

}  // namespace detail

/// Runs one command line. Output goes to `out`, diagnostics to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Job shop scheduling with AGV transport: exact CP search, QUBO compilation, QUBO heuristics", "agvjsp"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "write a reference or random instance");
  std::string gen_kind = "micro", gen_out;
  MicroInstanceSpec gen_spec;
  gen->add_option("--kind", gen_kind, "micro1, micro or set6")->check(CLI::IsMember({"micro1", "micro", "set6"}));
  gen->add_option("--seed", gen_spec.seed, "generator seed");
  gen->add_option("--agvs", gen_spec.agv_count, "number of AGVs")->check(CLI::PositiveNumber);
  gen->add_option("--max-jobs", gen_spec.max_jobs)->check(CLI::PositiveNumber);
  gen->add_option("--max-ops", gen_spec.max_ops_per_job)->check(CLI::PositiveNumber);
  gen->add_option("--max-machines", gen_spec.max_machines)->check(CLI::PositiveNumber);
  gen->add_option("--max-distance", gen_spec.max_distance)->check(CLI::PositiveNumber);
  gen->add_option("--max-duration", gen_spec.max_duration)->check(CLI::PositiveNumber);
  gen->add_option("--out", gen_out, "output file (default stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "solve an instance");
  std::string solve_instance, solve_out, solve_mode = "dicho", solve_format = "text";
  bool use_cp = false, use_oracle = false, use_anneal = false, use_tabu = false, preassign = false;
  std::uint64_t solve_seed = 0;
  std::int64_t solve_budget = 0;
  int solve_restarts = 1;
  detail::QuboFlags solve_qubo;
  solve->add_option("instance", solve_instance, "instance JSON")->required()->check(CLI::ExistingFile);
  auto* f_cp = solve->add_flag("--cp", use_cp, "constraint-based branch and bound (default)");
  auto* f_or = solve->add_flag("--oracle", use_oracle, "exhaustive search (micro instances only)");
  auto* f_an = solve->add_flag("--anneal", use_anneal, "simulated annealing on the QUBO");
  auto* f_tb = solve->add_flag("--tabu", use_tabu, "tabu search on the QUBO");
  f_cp->excludes(f_or, f_an, f_tb);
  f_or->excludes(f_an, f_tb);
  f_an->excludes(f_tb);
  solve->add_option("--mode", solve_mode, "mono or dicho");
  solve->add_flag("--agvs-preassign", preassign, "enumerate AGV assignments before searching");
  solve->add_option("--seed", solve_seed, "seed for the heuristics");
  solve->add_option("--restarts", solve_restarts, "heuristic restarts")->check(CLI::PositiveNumber);
  solve->add_option("--budget-ms", solve_budget, "time budget in milliseconds (0 = none)");
  solve->add_option("--format", solve_format, "json or text")->check(CLI::IsMember({"json", "text"}));
  solve->add_option("--out", solve_out, "write the schedule JSON here");
  detail::add_qubo_flags(solve, solve_qubo);

  // build-qubo
  auto* build = app.add_subcommand("build-qubo", "compile an instance to a QUBO file and label sidecar");
  std::string build_instance, build_out;
  detail::QuboFlags build_qubo;
  build->add_option("instance", build_instance, "instance JSON")->required()->check(CLI::ExistingFile);
  build->add_option("--out", build_out, "QUBO file (default <instance>.qubo); labels go to <out>.labels.json");
  detail::add_qubo_flags(build, build_qubo);

  // anneal / tabu
  struct MinimizeArgs {
    std::string qubo, labels, instance, out, schedule_out;
    std::uint64_t seed = 0;
    int restarts = 1;
    std::int64_t steps = 0;
    int tenure = 0;
  };
  MinimizeArgs anneal_args, tabu_args;
  auto add_minimize = [&](const char* name, const char* help, MinimizeArgs& a, bool is_tabu) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("qubo", a.qubo, "QUBO file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--instance", a.instance, "instance JSON, to decode the result");
    cmd->add_option("--labels", a.labels, "label sidecar (default <qubo>.labels.json)");
    cmd->add_option("--seed", a.seed, "seed of restart 0");
    cmd->add_option("--restarts", a.restarts)->check(CLI::PositiveNumber);
    if (is_tabu) {
      cmd->add_option("--iterations", a.steps, "iterations per restart (default 50 n)");
      cmd->add_option("--tenure", a.tenure, "tabu tenure (default max(10, n / 20))");
    } else {
      cmd->add_option("--sweeps", a.steps, "sweeps per restart (default 10 n)");
    }
    cmd->add_option("--out", a.out, "solution file (default stdout)");
    cmd->add_option("--schedule", a.schedule_out, "write the decoded, compacted schedule JSON here");
    return cmd;
  };
  auto* anneal = add_minimize("anneal", "simulated annealing on a QUBO file", anneal_args, false);
  auto* tabu = add_minimize("tabu", "tabu search on a QUBO file", tabu_args, true);

  // validate
  auto* validate = app.add_subcommand("validate", "check a schedule against an instance");
  std::string val_schedule, val_instance;
  detail::ScheduleFlags val_flags;
  validate->add_option("schedule", val_schedule, "schedule JSON")->required()->check(CLI::ExistingFile);
  validate->add_option("--instance", val_instance, "instance JSON")->required()->check(CLI::ExistingFile);
  detail::add_schedule_flags(validate, val_flags);

  // cross-validate
  auto* xval = app.add_subcommand("cross-validate", "encode CP optima and evaluate them under the QUBO");
  std::vector<std::string> xval_instances;
  int xval_random = 0;
  std::uint64_t xval_seed = 0;
  int xval_agvs = 0;
  detail::QuboFlags xval_qubo;
  xval->add_option("instances", xval_instances, "instance JSON files")->check(CLI::ExistingFile);
  xval->add_option("--random", xval_random, "also check this many generated micro instances");
  xval->add_option("--seed", xval_seed, "seed of the first generated instance");
  xval->add_option("--agvs", xval_agvs, "AGVs of generated instances (default alternates 1 and 2)");
  detail::add_qubo_flags(xval, xval_qubo);

  // bench
  auto* benchcmd = app.add_subcommand("bench", "run backends over a directory of instances");
  std::string bench_dir, bench_backends = "cp", bench_mode = "dicho", bench_format = "text", bench_out;
  bench::Options bench_opts;
  benchcmd->add_option("dir", bench_dir, "directory of instance JSON files")->required()->check(CLI::ExistingDirectory);
  benchcmd->add_option("--backends", bench_backends, "comma-separated list of cp, tabu, anneal");
  benchcmd->add_option("--mode", bench_mode, "mono or dicho");
  benchcmd->add_option("--budget-ms", bench_opts.budget_ms, "CP time budget per instance");
  benchcmd->add_option("--seed", bench_opts.seed, "seed for the heuristics");
  benchcmd->add_option("--format", bench_format, "json or text")->check(CLI::IsMember({"json", "text"}));
  benchcmd->add_flag("--timing", bench_opts.timing, "include wall-clock columns");
  benchcmd->add_option("--out", bench_out, "output file (default stdout)");

  // gantt
  auto* gantt = app.add_subcommand("gantt", "draw a schedule");
  std::string gantt_schedule, gantt_instance, gantt_format = "text", gantt_out;
  detail::ScheduleFlags gantt_flags;
  gantt->add_option("schedule", gantt_schedule, "schedule JSON")->required()->check(CLI::ExistingFile);
  gantt->add_option("--instance", gantt_instance, "instance JSON")->required()->check(CLI::ExistingFile);
  gantt->add_option("--format", gantt_format, "text or svg")->check(CLI::IsMember({"text", "svg"}));
  gantt->add_option("--out", gantt_out, "output file (default stdout)");
  detail::add_schedule_flags(gantt, gantt_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (gen->parsed()) {
      Instance inst;
      if (gen_kind == "micro1") inst = micro1(gen_spec.agv_count);
      else if (gen_kind == "set6") inst = set6_shaped_instance(gen_spec.seed == 0 ? 6 : gen_spec.seed);
      else inst = random_micro_instance(gen_spec);
      detail::emit(gen_out, instance_to_json(inst).dump(2) + "\n", out);
      return kOk;
    }

    if (solve->parsed()) {
      const auto inst = load_instance(solve_instance);
      json summary;
      std::optional<Schedule> schedule;
      bool optimal = false;
      std::optional<Time> lower;
      ModelOptions schedule_opts;
      if (use_oracle) {
        const auto r = oracle::brute_force_optimal(inst);
        schedule = r.schedule;
        optimal = true;
        summary = {{"backend", "oracle"}, {"states", r.states}};
      } else if (use_anneal || use_tabu) {
        const auto c = solve_qubo.config(inst);
        const auto m = qubo::make_model(inst, c);
        const auto q = qubo::assemble_hamiltonian(m);
        qubo::MinimizerResult r;
        if (use_tabu) {
          qubo::TabuConfig t;
          t.seed = solve_seed;
          t.restarts = solve_restarts;
          r = qubo::tabu_search(q, t);
        } else {
          qubo::AnnealConfig a;
          a.seed = solve_seed;
          a.restarts = solve_restarts;
          r = qubo::simulated_annealing(q, a);
        }
        const auto d = qubo::decode_bits(m, q, r.bits);
        schedule_opts = qubo::decode_options(c);
        summary = {{"backend", use_tabu ? "tabu" : "anneal"}, {"energy", r.energy}, {"variables", q.size()}};
        if (!d.schedule) {
          out << "energy " << r.energy << "\nfeasible false\n";
          for (const auto& v : d.violations) out << to_string(v.term) << ": " << v.detail << "\n";
          return kFailed;
        }
        summary["decoded_makespan"] = d.schedule->makespan;
        schedule = qubo::compact_gaps(inst, *d.schedule, schedule_opts);
      } else {
        cp::SolveOptions so;
        so.mode = detail::parse_mode(solve_mode);
        so.model.start_target_transports = !solve_qubo.no_start_target;
        so.enumerate_assignments = preassign;
        so.time_budget_ms = solve_budget;
        const auto r = cp::solve(inst, so);
        schedule = r.schedule;
        optimal = r.optimal;
        lower = r.lower_bound;
        schedule_opts = so.model;
        summary = {{"backend", "cp"}, {"mode", cp::to_string(so.mode)}, {"nodes", r.stats.nodes}};
      }
      if (const auto vs = validate_schedule(inst, *schedule, schedule_opts); !vs.empty()) {
        err << "solver produced an invalid schedule\n";
        detail::print_violations(vs, err);
        return kFailed;
      }
      if (!solve_out.empty()) save_schedule(solve_out, *schedule);
      if (solve_format == "json") {
        summary["makespan"] = schedule->makespan;
        summary["optimal"] = optimal;
        if (lower) summary["lower_bound"] = *lower;
        summary["schedule"] = schedule_to_json(*schedule);
        out << summary.dump(2) << "\n";
      } else {
        if (summary.contains("energy")) out << "energy " << summary["energy"].get<qubo::Coefficient>() << "\n";
        out << detail::summary_text(*schedule, optimal, lower);
      }
      return kOk;
    }

    if (build->parsed()) {
      const auto inst = load_instance(build_instance);
      const auto c = build_qubo.config(inst);
      qubo::Model m;
      try {
        m = qubo::make_model(inst, c);
      } catch (const std::invalid_argument& e) {
        err << e.what() << "\n";
        return kFailed;
      }
      const auto q = qubo::assemble_hamiltonian(m);
      std::string path = build_out;
      if (path.empty()) path = std::filesystem::path(build_instance).replace_extension(".qubo").string();
      write_text_file(path, qubo::export_qubo(q));
      write_text_file(path + ".labels.json", qubo::labels_to_json(m).dump(2) + "\n");
      out << "variables " << q.size() << "\nnonzeros " << q.nonzeros() << "\nhorizon " << c.horizon << "\nalpha " << c.alpha
          << "\nqubo " << path << "\nlabels " << path << ".labels.json\n";
      return kOk;
    }

    if (anneal->parsed() || tabu->parsed()) {
      const bool is_tabu = tabu->parsed();
      const auto& a = is_tabu ? tabu_args : anneal_args;
      const auto q = qubo::import_qubo(detail::read_file(a.qubo));
      if (q.size() == 0) throw std::runtime_error("QUBO has no variables");
      qubo::MinimizerResult r;
      if (is_tabu) {
        qubo::TabuConfig t;
        t.seed = a.seed;
        t.restarts = a.restarts;
        t.max_iterations = a.steps;
        t.tenure = a.tenure;
        r = qubo::tabu_search(q, t);
      } else {
        qubo::AnnealConfig c;
        c.seed = a.seed;
        c.restarts = a.restarts;
        c.sweeps = a.steps;
        r = qubo::simulated_annealing(q, c);
      }
      detail::emit(a.out, qubo::solution_to_string({r.energy, r.bits}), out);
      if (a.instance.empty()) return kOk;
      const auto inst = load_instance(a.instance);
      const auto m = qubo::model_from_labels(inst, read_json_file(a.labels.empty() ? a.qubo + ".labels.json" : a.labels));
      const auto d = qubo::decode_bits(m, q, r.bits);
      std::ostream& report = a.out.empty() || a.out == "-" ? err : out;
      if (!d.schedule) {
        report << "feasible false\n";
        for (const auto& v : d.violations) report << to_string(v.term) << ": " << v.detail << "\n";
        return kFailed;
      }
      const auto compacted = qubo::compact_gaps(inst, *d.schedule, qubo::decode_options(m.config));
      report << "feasible true\nmakespan " << d.schedule->makespan << "\ncompacted_makespan " << compacted.makespan << "\n";
      if (!a.schedule_out.empty()) save_schedule(a.schedule_out, compacted);
      return kOk;
    }

    if (validate->parsed()) {
      const auto inst = load_instance(val_instance);
      const auto s = load_schedule(val_schedule);
      const auto vs = validate_schedule(inst, s, val_flags.options());
      if (vs.empty()) {
        out << "valid makespan " << makespan(s) << "\n";
        return kOk;
      }
      detail::print_violations(vs, out);
      return kFailed;
    }

    if (xval->parsed()) {
      std::vector<std::pair<std::string, Instance>> todo;
      for (const auto& f : xval_instances) todo.push_back({f, load_instance(f)});
      for (int k = 0; k < xval_random; ++k) {
        MicroInstanceSpec spec;
        spec.seed = xval_seed + k;
        spec.agv_count = xval_agvs > 0 ? xval_agvs : (k % 2 == 0 ? 1 : 2);
        todo.push_back({"micro seed " + std::to_string(spec.seed), random_micro_instance(spec)});
      }
      bool all = true;
      for (const auto& [name, inst] : todo) {
        oracle::CrossValidateOptions o;
        o.start_target_transports = !xval_qubo.no_start_target;
        o.horizon = detail::auto_or_int(xval_qubo.horizon, "--horizon");
        o.alpha = detail::auto_or_int(xval_qubo.alpha, "--alpha");
        const auto r = oracle::cross_validate(inst, o);
        all = all && r.pass;
        out << oracle::to_json(r).dump() << "\n";
      }
      return all ? kOk : kFailed;
    }

    if (benchcmd->parsed()) {
      bench_opts.mode = detail::parse_mode(bench_mode);
      bench_opts.backends.clear();
      std::stringstream ss(bench_backends);
      for (std::string b; std::getline(ss, b, ',');) {
        if (b != "cp" && b != "tabu" && b != "anneal") throw UsageError("unknown backend '" + b + "'");
        bench_opts.backends.push_back(b);
      }
      const auto rows = bench::run(bench_dir, bench_opts);
      detail::emit(bench_out,
                   bench_format == "json" ? bench::to_json(rows, bench_opts.timing).dump(2) + "\n"
                                          : bench::to_text(rows, bench_opts.timing),
                   out);
      return kOk;
    }

    if (gantt->parsed()) {
      const auto inst = load_instance(gantt_instance);
      const auto s = load_schedule(gantt_schedule);
      const auto fmt = gantt_format == "svg" ? GanttFormat::svg : GanttFormat::text;
      try {
        detail::emit(gantt_out, render_gantt(inst, s, fmt, gantt_flags.options()), out);
      } catch (const std::invalid_argument& e) {
        err << e.what();
        return kFailed;
      }
      return kOk;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}

}  // namespace agvjsp::cli
