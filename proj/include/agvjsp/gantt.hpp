#pragma once

// Gantt charts: AGV rows first, then one row per machine.

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "agvjsp/core.hpp"

namespace agvjsp {

enum class GanttFormat { text, svg };

namespace detail {

inline char job_symbol(int job) {
  static const std::string symbols = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";
  return job < static_cast<int>(symbols.size()) ? symbols[job] : '#';
}

inline const char* job_color(int job) {
  static const char* palette[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1",
                                  "#76b7b2", "#edc948", "#ff9da7", "#9c755f", "#1f77b4"};
  return palette[job % 10];
}

inline constexpr const char* kEmptyTravelColor = "#bab0ac";

struct Block {
  Time start, end;
  int job;  // -1: empty travel
};

struct Row {
  std::string label;
  std::vector<Block> blocks;
};

inline std::vector<Row> gantt_rows(const Instance& inst, const Schedule& s, const ModelOptions& opts) {
  std::vector<Row> rows;
  for (int b = 0; b < inst.agv_count; ++b) {
    Row row{"AGV" + std::to_string(b), {}};
    std::vector<int> ids;
    for (int k = 0; k < static_cast<int>(s.transport_tasks.size()); ++k)
      if (s.transport_tasks[k].agv == b) ids.push_back(k);
    const auto order = agv_task_order(s.transport_tasks, ids, inst.distances);
    for (std::size_t x = 0; x < order.size(); ++x) {
      const auto& t = s.transport_tasks[order[x]];
      if (x == 0 && opts.agv_initial_at_start) {
        const Time reach = inst.distances(inst.start_location, t.from);
        if (reach > 0) row.blocks.push_back({t.start - reach, t.start, -1});
      }
      row.blocks.push_back({t.start, t.end, t.payload ? t.payload->job : -1});
      if (x + 1 < order.size()) {
        const Time travel = inst.distances(t.to, s.transport_tasks[order[x + 1]].from);
        if (travel > 0) row.blocks.push_back({t.end, t.end + travel, -1});
      }
    }
    rows.push_back(std::move(row));
  }
  for (int m = 0; m < inst.machines; ++m) {
    Row row{"M" + std::to_string(m), {}};
    for (const auto& t : s.machine_tasks)
      if (t.machine == m) row.blocks.push_back({t.start, t.end, t.job});
    std::sort(row.blocks.begin(), row.blocks.end(), [](const Block& a, const Block& b) { return a.start < b.start; });
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

/// Text mode uses one character per time unit: a job letter for work, '~'
/// for empty AGV travel, '.' for idle time. An empty schedule yields only the
/// header line. Throws std::invalid_argument for an infeasible schedule.
inline std::string render_gantt(const Instance& inst, const Schedule& s, GanttFormat format,
                                const ModelOptions& opts = {}) {
  const bool empty = s.machine_tasks.empty() && s.transport_tasks.empty();
  if (!empty)
    if (const auto vs = validate_schedule(inst, s, opts); !vs.empty())
      throw std::invalid_argument("cannot draw an infeasible schedule:\n" + describe(vs));
  const Time span = empty ? 0 : makespan(s);
  const auto rows = empty ? std::vector<detail::Row>{} : detail::gantt_rows(inst, s, opts);
  std::ostringstream out;

  if (format == GanttFormat::text) {
    out << "makespan " << span << "\n";
    if (empty) return out.str();
    std::size_t width = 0;
    for (const auto& r : rows) width = std::max(width, r.label.size());
    for (const auto& r : rows) {
      std::string line(static_cast<std::size_t>(span), '.');
      for (const auto& b : r.blocks)
        for (Time t = std::max<Time>(0, b.start); t < b.end && t < span; ++t)
          line[t] = b.job < 0 ? '~' : detail::job_symbol(b.job);
      out << r.label << std::string(width - r.label.size() + 1, ' ') << '|' << line << "|\n";
    }
    out << "legend";
    for (int j = 0; j < static_cast<int>(inst.jobs.size()); ++j) out << ' ' << detail::job_symbol(j) << "=job" << j;
    out << " ~=empty travel .=idle\n";
    return out.str();
  }

  const int unit = 20, row_h = 24, left = 60, top = 30;
  const int width = left + static_cast<int>(span) * unit + 20;
  const int height = top + static_cast<int>(rows.size()) * row_h + 40;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  out << "<text x=\"4\" y=\"18\" font-family=\"monospace\" font-size=\"12\">makespan " << span << "</text>\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const int y = top + static_cast<int>(r) * row_h;
    out << "<text x=\"4\" y=\"" << y + 16 << "\" font-family=\"monospace\" font-size=\"12\">" << rows[r].label << "</text>\n";
    for (const auto& b : rows[r].blocks) {
      out << "<rect x=\"" << left + b.start * unit << "\" y=\"" << y + 2 << "\" width=\"" << (b.end - b.start) * unit
          << "\" height=\"" << row_h - 4 << "\" fill=\"" << (b.job < 0 ? detail::kEmptyTravelColor : detail::job_color(b.job))
          << "\" stroke=\"#333\"/>\n";
      if (b.job >= 0)
        out << "<text x=\"" << left + b.start * unit + 3 << "\" y=\"" << y + 16
            << "\" font-family=\"monospace\" font-size=\"11\" fill=\"#fff\">" << b.job << "</text>\n";
    }
  }
  const int ly = top + static_cast<int>(rows.size()) * row_h + 20;
  int lx = 4;
  for (int j = 0; j < static_cast<int>(inst.jobs.size()); ++j, lx += 70)
    out << "<rect x=\"" << lx << "\" y=\"" << ly - 10 << "\" width=\"12\" height=\"12\" fill=\"" << detail::job_color(j)
        << "\"/><text x=\"" << lx + 16 << "\" y=\"" << ly << "\" font-family=\"monospace\" font-size=\"11\">job " << j
        << "</text>\n";
  out << "<rect x=\"" << lx << "\" y=\"" << ly - 10 << "\" width=\"12\" height=\"12\" fill=\"" << detail::kEmptyTravelColor
      << "\"/><text x=\"" << lx + 16 << "\" y=\"" << ly << "\" font-family=\"monospace\" font-size=\"11\">empty travel</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace agvjsp
