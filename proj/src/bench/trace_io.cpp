#include "rspider/bench/trace_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "rspider/bench/config.hpp"

namespace rspider::bench {
namespace {

double parse_number(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("trace: bad number '" + s + "'");
  }
  return v;
}

template <typename Int>
Int parse_int(const std::string& s) {
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("trace: bad integer '" + s + "'");
  }
  return v;
}

}  // namespace

std::string trace_file_name(const std::string& optimizer, std::uint64_t seed) {
  return optimizer + "_seed" + std::to_string(seed) + ".csv";
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_trace(std::ostream& out, const std::string& run_id,
                 std::uint64_t seed, const RunTrace& trace, std::size_t n,
                 double reference, bool reference_is_runset_min) {
  out << (reference_is_runset_min ? kTraceHeaderRunsetMin : kTraceHeader) << '\n';
  for (const TraceRecord& r : trace.records) {
    const double grad = r.true_grad_norm.value_or(r.grad_estimate_norm);
    out << run_id << ',' << seed << ',' << r.iteration << ',' << r.ifo << ','
        << format_number(r.objective) << ','
        << format_number(r.objective - reference) << ',' << format_number(grad)
        << ',' << format_number(r.elapsed_seconds) << ','
        << format_number(static_cast<double>(r.ifo) / static_cast<double>(n))
        << '\n';
  }
}

TraceFile read_trace(std::istream& in) {
  TraceFile file;
  if (!std::getline(in, file.header)) throw ConfigError("trace: empty file");
  if (file.header != kTraceHeader && file.header != kTraceHeaderRunsetMin) {
    throw ConfigError("trace: unexpected header '" + file.header + "'");
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 9) throw ConfigError("trace: expected 9 columns");
    TraceRow row;
    row.run_id = cells[0];
    row.seed = parse_int<std::uint64_t>(cells[1]);
    row.iteration = parse_int<std::size_t>(cells[2]);
    row.ifo = parse_int<std::uint64_t>(cells[3]);
    row.objective = parse_number(cells[4]);
    row.subopt = parse_number(cells[5]);
    row.grad_norm = parse_number(cells[6]);
    row.elapsed_s = parse_number(cells[7]);
    row.ifo_per_n = parse_number(cells[8]);
    file.rows.push_back(row);
  }
  return file;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::nan("");
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  if (values.size() % 2 == 1) return values[m];
  return 0.5 * (values[m - 1] + values[m]);
}

std::vector<AggregatePoint> aggregate_median(
    const std::vector<std::vector<TraceRow>>& runs) {
  std::vector<std::uint64_t> grid;
  for (const auto& run : runs)
    for (const TraceRow& r : run) grid.push_back(r.ifo);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<AggregatePoint> out;
  std::vector<std::size_t> cursor(runs.size(), 0);
  for (std::uint64_t ifo : grid) {
    std::vector<double> subopt, elapsed;
    double per_n = 0.0;
    for (std::size_t s = 0; s < runs.size(); ++s) {
      const auto& run = runs[s];
      while (cursor[s] < run.size() && run[cursor[s]].ifo <= ifo) ++cursor[s];
      if (cursor[s] == 0) continue;
      const TraceRow& last = run[cursor[s] - 1];
      subopt.push_back(last.subopt);
      elapsed.push_back(last.elapsed_s);
      if (last.ifo == ifo) per_n = last.ifo_per_n;
    }
    AggregatePoint p;
    p.ifo = ifo;
    p.ifo_per_n = per_n;
    p.median_subopt = median(subopt);
    p.median_elapsed_s = median(elapsed);
    p.seeds = subopt.size();
    out.push_back(p);
  }
  return out;
}

}  // namespace rspider::bench
