#pragma once

// JSON documents for instances and schedules. Both carry "format": 1.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "agvjsp/core.hpp"
#include "json.hpp"

namespace agvjsp {

using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

inline std::string to_string(LocationKind k) {
  switch (k) {
    case LocationKind::start: return "start";
    case LocationKind::machine: return "machine";
    case LocationKind::target: return "target";
  }
  return "machine";
}

inline LocationKind location_kind_from(const std::string& s) {
  if (s == "start" || s == "Start") return LocationKind::start;
  if (s == "target" || s == "Target") return LocationKind::target;
  if (s == "machine" || s == "Machine") return LocationKind::machine;
  throw std::invalid_argument("unknown location kind '" + s + "'");
}

inline void check_format(const json& j, const char* what) {
  if (!j.contains("format") || j.at("format").get<int>() != kFormatVersion)
    throw std::invalid_argument(std::string(what) + " document must carry \"format\": 1");
}

inline json instance_to_json(const Instance& inst) {
  json locs = json::array();
  for (const auto& l : inst.locations) {
    json o = {{"id", l.id}, {"kind", to_string(l.kind)}};
    o["machine"] = l.machine ? json(*l.machine) : json(nullptr);
    locs.push_back(o);
  }
  json jobs = json::array();
  for (const auto& job : inst.jobs) {
    json ops = json::array();
    for (const auto& op : job.operations) ops.push_back({{"machine", op.machine}, {"duration", op.duration}});
    jobs.push_back(ops);
  }
  return {{"format", kFormatVersion}, {"machines", inst.machines}, {"agvs", inst.agv_count},
          {"locations", locs},         {"distances", inst.distances.rows()}, {"jobs", jobs}};
}

inline Instance instance_from_json(const json& j) {
  check_format(j, "instance");
  Instance inst;
  inst.machines = j.at("machines").get<int>();
  inst.agv_count = j.at("agvs").get<int>();
  int starts = 0, targets = 0;
  for (const auto& l : j.at("locations")) {
    Location loc;
    loc.id = l.at("id").get<int>();
    loc.kind = location_kind_from(l.at("kind").get<std::string>());
    if (l.contains("machine") && !l.at("machine").is_null()) loc.machine = l.at("machine").get<int>();
    if (loc.kind == LocationKind::start) inst.start_location = loc.id, ++starts;
    if (loc.kind == LocationKind::target) inst.target_location = loc.id, ++targets;
    inst.locations.push_back(loc);
  }
  if (starts != 1 || targets != 1) throw std::invalid_argument("instance needs exactly one start and one target location");
  inst.distances = DistanceMatrix(j.at("distances").get<std::vector<std::vector<Time>>>());
  int id = 0;
  for (const auto& ops : j.at("jobs")) {
    Job job{id, {}};
    int pos = 0;
    for (const auto& op : ops) job.operations.push_back({id, pos++, op.at("machine").get<int>(), op.at("duration").get<Time>()});
    inst.jobs.push_back(std::move(job));
    ++id;
  }
  return inst;
}

inline json schedule_to_json(const Schedule& s) {
  json mt = json::array();
  for (const auto& t : s.machine_tasks)
    mt.push_back({{"job", t.job}, {"position", t.position}, {"machine", t.machine}, {"start", t.start}, {"end", t.end}});
  json tt = json::array();
  for (const auto& t : s.transport_tasks) {
    json o = {{"from", t.from}, {"to", t.to}, {"agv", t.agv}, {"start", t.start}, {"end", t.end}};
    o["payload"] = t.payload ? json{{"job", t.payload->job}, {"transition", t.payload->transition}} : json(nullptr);
    tt.push_back(o);
  }
  return {{"format", kFormatVersion}, {"makespan", s.makespan}, {"machine_tasks", mt}, {"transport_tasks", tt}};
}

inline Schedule schedule_from_json(const json& j) {
  check_format(j, "schedule");
  Schedule s;
  for (const auto& t : j.at("machine_tasks"))
    s.machine_tasks.push_back({t.at("job").get<int>(), t.at("position").get<int>(), t.at("machine").get<int>(),
                               t.at("start").get<Time>(), t.at("end").get<Time>()});
  for (const auto& t : j.at("transport_tasks")) {
    TransportTask task{t.at("from").get<int>(), t.at("to").get<int>(), std::nullopt, t.at("agv").get<int>(),
                       t.at("start").get<Time>(), t.at("end").get<Time>()};
    if (t.contains("payload") && !t.at("payload").is_null())
      task.payload = TransportPayload{t.at("payload").at("job").get<int>(), t.at("payload").at("transition").get<int>()};
    s.transport_tasks.push_back(task);
  }
  s.makespan = j.contains("makespan") ? j.at("makespan").get<Time>() : makespan(s);
  return s;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

inline Instance load_instance(const std::string& path) { return instance_from_json(read_json_file(path)); }
inline Schedule load_schedule(const std::string& path) { return schedule_from_json(read_json_file(path)); }

inline void save_instance(const std::string& path, const Instance& inst) {
  write_text_file(path, instance_to_json(inst).dump(2) + "\n");
}
inline void save_schedule(const std::string& path, const Schedule& s) {
  write_text_file(path, schedule_to_json(s).dump(2) + "\n");
}

/// FNV-1a over the canonical compact JSON of the instance, as 16 hex digits.
inline std::string instance_hash(const Instance& inst) {
  const std::string text = instance_to_json(inst).dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

}  // namespace agvjsp
