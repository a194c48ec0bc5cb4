#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rspider/optimizers.hpp"

namespace rspider::bench {

inline constexpr const char* kTraceHeader =
    "run_id,seed,iteration,ifo,objective,subopt,grad_norm,elapsed_s,ifo_per_n";
/// Header used when no optimum is known and the sub-optimality column is
/// measured against the smallest objective seen across the run set.
inline constexpr const char* kTraceHeaderRunsetMin =
    "run_id,seed,iteration,ifo,objective,subopt_vs_runset_min,grad_norm,"
    "elapsed_s,ifo_per_n";

struct TraceRow {
  std::string run_id;
  std::uint64_t seed = 0;
  std::size_t iteration = 0;
  std::uint64_t ifo = 0;
  double objective = 0.0;
  double subopt = 0.0;
  double grad_norm = 0.0;
  double elapsed_s = 0.0;
  double ifo_per_n = 0.0;
};

/// "<optimizer>_seed<N>.csv".
std::string trace_file_name(const std::string& optimizer, std::uint64_t seed);

/// Shortest round-trip decimal text ("nan" / "inf" for non-finite values).
std::string format_number(double v);

/// Writes one run. `reference` is f* (or the run-set minimum when
/// `reference_is_runset_min`).
void write_trace(std::ostream& out, const std::string& run_id,
                 std::uint64_t seed, const RunTrace& trace, std::size_t n,
                 double reference, bool reference_is_runset_min);

struct TraceFile {
  std::string header;
  std::vector<TraceRow> rows;
};

TraceFile read_trace(std::istream& in);

/// Median over seeds of each optimizer's sub-optimality curve. Curves are
/// step functions of IFO; the grid is the union of all IFO values and a seed
/// contributes at a grid point once it has a record at or before it.
struct AggregatePoint {
  std::uint64_t ifo = 0;
  double ifo_per_n = 0.0;
  double median_subopt = 0.0;
  double median_elapsed_s = 0.0;
  std::size_t seeds = 0;
};

std::vector<AggregatePoint> aggregate_median(
    const std::vector<std::vector<TraceRow>>& runs);

double median(std::vector<double> values);

}  // namespace rspider::bench
