#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rspider/kpca.hpp"
#include "rspider/lrmc.hpp"

namespace rspider {

/// A LibSVM dataset. Feature indices are 0-based here; the text format is
/// 1-based and converted at the boundary.
struct RawDataset {
  using Row = std::vector<std::pair<int, double>>;

  std::vector<Row> rows;
  std::vector<double> labels;
  std::size_t d = 0;

  std::size_t n() const { return rows.size(); }
};

/// Parses `<label> <idx>:<val> ...` lines. Blank lines are skipped. `d` is the
/// largest index seen unless `dimension` is given, in which case larger
/// indices are errors. Throws ParseError with line and column.
RawDataset parse_libsvm(std::istream& in,
                        std::optional<std::size_t> dimension = std::nullopt);
RawDataset load_libsvm(const std::string& path,
                       std::optional<std::size_t> dimension = std::nullopt);

/// Writes values in shortest round-trip decimal form.
void write_libsvm(std::ostream& out, const RawDataset& data);

SparseRows to_sparse_rows(const RawDataset& data);

/// n Gaussian samples in R^d with covariance diag(decay^0, ..., decay^(d-1)).
RawDataset synth_kpca(std::size_t n, std::size_t d, std::size_t k, double decay,
                      std::uint64_t seed);

struct ObservationMask {
  std::vector<std::vector<int>> columns;  // observed rows per column
  double density = 1.0;
};

struct LrmcInstance {
  LrmcProblem problem;
  Matrix u_star;  // d x k, orthonormal
  Matrix g_star;  // k x n
  ObservationMask mask;
};

/// A = U* G* + noise N observed through a Bernoulli(density) mask; a column's
/// mask is re-drawn until it has at least k observations.
LrmcInstance synth_lrmc(std::size_t d, std::size_t n, std::size_t k,
                        double density, double noise, std::uint64_t seed);

struct DatasetInfo {
  std::string name;
  std::optional<int> classes;
  std::size_t samples;
  std::size_t features;
};

const std::vector<DatasetInfo>& dataset_registry();
std::optional<DatasetInfo> find_dataset(std::string_view name);

}  // namespace rspider
