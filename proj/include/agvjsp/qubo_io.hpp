#pragma once

// Files around a QUBO build: the label sidecar that ties variable indices to
// operations and times, and solution files ("<energy>\n<bitstring>\n").

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "agvjsp/io.hpp"
#include "agvjsp/qubo_model.hpp"

namespace agvjsp::qubo {

inline json labels_to_json(const Model& m) {
  const auto& tab = m.table;
  json ops = json::array();
  for (int i = 0; i < tab.total(); ++i) {
    json o = {{"index", i}, {"offset", m.indexer.x(i, 0)}, {"duration", tab.duration(i)}};
    if (!tab.is_walking(i)) {
      const auto& s = tab.standard[i];
      o["kind"] = "standard";
      o["job"] = s.job;
      o["position"] = s.position;
      o["machine"] = s.machine;
    } else {
      const auto& w = tab.walk(i);
      const auto& g = tab.groups[w.group];
      o["kind"] = "walking";
      o["job"] = g.job;
      o["transition"] = g.transition;
      o["agv"] = w.agv;
      o["from"] = w.source;
      o["to"] = w.destination;
      o["group"] = w.group;
    }
    ops.push_back(o);
  }
  return {{"format", kFormatVersion},
          {"instance", instance_hash(*m.instance)},
          {"variables", m.indexer.size()},
          {"horizon", m.config.horizon},
          {"alpha", m.config.alpha},
          {"start_target_transports", m.config.start_target_transports},
          {"operations", ops},
          {"u_offset", m.indexer.u(0)}};
}

/// Rebuilds the model a sidecar describes. The instance must be the one the
/// sidecar was written for.
inline Model model_from_labels(const Instance& inst, const json& labels) {
  check_format(labels, "label");
  if (labels.at("instance").get<std::string>() != instance_hash(inst))
    throw std::invalid_argument("label sidecar was written for a different instance");
  QuboBuildConfig config;
  config.horizon = labels.at("horizon").get<Time>();
  config.alpha = labels.at("alpha").get<Coefficient>();
  config.start_target_transports = labels.at("start_target_transports").get<bool>();
  Model m = make_model(inst, config);
  if (labels.at("variables").get<std::size_t>() != m.indexer.size())
    throw std::invalid_argument("label sidecar variable count does not match the instance");
  return m;
}

inline std::string bits_to_string(const BitVector& x) {
  std::string s(x.size(), '0');
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i] ? '1' : '0';
  return s;
}

inline BitVector bits_from_string(const std::string& s) {
  BitVector x(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '0' && s[i] != '1') throw std::invalid_argument("bit string may contain only 0 and 1");
    x[i] = s[i] == '1';
  }
  return x;
}

struct Solution {
  Coefficient energy = 0;
  BitVector bits;
};

inline std::string solution_to_string(const Solution& s) {
  return std::to_string(s.energy) + "\n" + bits_to_string(s.bits) + "\n";
}

inline Solution solution_from_string(const std::string& text) {
  std::istringstream in(text);
  Solution s;
  std::string bits;
  if (!(in >> s.energy >> bits)) throw std::runtime_error("solution file needs an energy line and a bit string");
  s.bits = bits_from_string(bits);
  return s;
}

}  // namespace agvjsp::qubo
