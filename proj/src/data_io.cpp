#include "rspider/data_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>

#include "rspider/errors.hpp"

namespace rspider {
namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> split(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

std::optional<double> to_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::optional<long long> to_index(std::string_view s) {
  if (s.empty()) return std::nullopt;
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

void put_double(std::ostream& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, res.ptr - buf);
}

}  // namespace

RawDataset parse_libsvm(std::istream& in, std::optional<std::size_t> dimension) {
  RawDataset data;
  std::string line;
  std::size_t line_no = 0;
  long long max_index = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split(line);
    if (tokens.empty()) continue;

    const auto label = to_double(tokens[0].text);
    if (!label) {
      throw ParseError("non-numeric label '" + std::string(tokens[0].text) + "'",
                       line_no, tokens[0].column);
    }
    RawDataset::Row row;
    long long previous = 0;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const Token& tok = tokens[t];
      const auto colon = tok.text.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError("expected <index>:<value>, got '" +
                             std::string(tok.text) + "'",
                         line_no, tok.column);
      }
      const auto index = to_index(tok.text.substr(0, colon));
      if (!index) {
        throw ParseError("non-numeric feature index in '" +
                             std::string(tok.text) + "'",
                         line_no, tok.column);
      }
      if (*index <= 0) {
        throw ParseError("feature indices are 1-based, got " +
                             std::to_string(*index),
                         line_no, tok.column);
      }
      if (*index <= previous) {
        throw ParseError("feature indices must increase (" +
                             std::to_string(previous) + " then " +
                             std::to_string(*index) + ")",
                         line_no, tok.column);
      }
      if (dimension && static_cast<std::size_t>(*index) > *dimension) {
        throw ParseError("feature index " + std::to_string(*index) +
                             " exceeds dimension " + std::to_string(*dimension),
                         line_no, tok.column);
      }
      const auto value = to_double(tok.text.substr(colon + 1));
      if (!value) {
        throw ParseError("non-numeric feature value in '" +
                             std::string(tok.text) + "'",
                         line_no, tok.column + colon + 1);
      }
      row.emplace_back(static_cast<int>(*index - 1), *value);
      previous = *index;
    }
    max_index = std::max(max_index, previous);
    data.rows.push_back(std::move(row));
    data.labels.push_back(*label);
  }
  data.d = dimension ? *dimension : static_cast<std::size_t>(max_index);
  return data;
}

RawDataset load_libsvm(const std::string& path,
                       std::optional<std::size_t> dimension) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_libsvm(in, dimension);
}

void write_libsvm(std::ostream& out, const RawDataset& data) {
  for (std::size_t i = 0; i < data.n(); ++i) {
    put_double(out, data.labels[i]);
    for (const auto& [index, value] : data.rows[i]) {
      out << ' ' << index + 1 << ':';
      put_double(out, value);
    }
    out << '\n';
  }
}

SparseRows to_sparse_rows(const RawDataset& data) {
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t i = 0; i < data.n(); ++i) {
    for (const auto& [index, value] : data.rows[i]) {
      triplets.emplace_back(static_cast<int>(i), index, value);
    }
  }
  SparseRows out(static_cast<Eigen::Index>(data.n()),
                 static_cast<Eigen::Index>(data.d));
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

RawDataset synth_kpca(std::size_t n, std::size_t d, std::size_t k, double decay,
                      std::uint64_t seed) {
  if (k < 1 || k >= d) throw DimensionError("synth_kpca: need 1 <= k < d");
  if (!(decay > 0.0 && decay <= 1.0)) {
    throw ContractError("synth_kpca: decay must lie in (0, 1]");
  }
  Rng rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<double> scale(d);
  for (std::size_t j = 0; j < d; ++j) {
    scale[j] = std::sqrt(std::pow(decay, static_cast<double>(j)));
  }
  RawDataset data;
  data.d = d;
  data.rows.resize(n);
  data.labels.assign(n, 0.0);
  for (auto& row : data.rows) {
    row.reserve(d);
    for (std::size_t j = 0; j < d; ++j) {
      row.emplace_back(static_cast<int>(j), scale[j] * gauss(rng));
    }
  }
  return data;
}

LrmcInstance synth_lrmc(std::size_t d, std::size_t n, std::size_t k,
                        double density, double noise, std::uint64_t seed) {
  if (k < 1 || k >= d) throw DimensionError("synth_lrmc: need 1 <= k < d");
  if (n < 1) throw DimensionError("synth_lrmc: need n >= 1");
  if (!(density > 0.0 && density <= 1.0)) {
    throw ContractError("synth_lrmc: density must lie in (0, 1]");
  }
  if (density * static_cast<double>(d) < static_cast<double>(k + 2)) {
    throw ContractError("synth_lrmc: density * d must be at least k + 2");
  }
  if (noise < 0.0) throw ContractError("synth_lrmc: noise must be >= 0");

  Rng rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto di = static_cast<Eigen::Index>(d);
  const auto ni = static_cast<Eigen::Index>(n);
  const auto ki = static_cast<Eigen::Index>(k);

  Matrix raw(di, ki);
  for (Eigen::Index j = 0; j < ki; ++j)
    for (Eigen::Index i = 0; i < di; ++i) raw(i, j) = gauss(rng);
  const Matrix u_star =
      ManifoldPoint::from_ambient(ManifoldKind::Grassmann(int(d), int(k)), raw)
          .coords();
  Matrix g_star(ki, ni);
  for (Eigen::Index j = 0; j < ni; ++j)
    for (Eigen::Index i = 0; i < ki; ++i) g_star(i, j) = gauss(rng);
  Matrix full = u_star * g_star;
  if (noise > 0.0) {
    for (Eigen::Index j = 0; j < ni; ++j)
      for (Eigen::Index i = 0; i < di; ++i) full(i, j) += noise * gauss(rng);
  }

  ObservationMask mask;
  mask.density = density;
  std::vector<LrmcColumn> columns(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<int> rows;
    do {
      rows.clear();
      for (std::size_t i = 0; i < d; ++i) {
        if (unit(rng) < density) rows.push_back(static_cast<int>(i));
      }
    } while (rows.size() < k);
    columns[j].values.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      columns[j].values(static_cast<Eigen::Index>(r)) =
          full(rows[r], static_cast<Eigen::Index>(j));
    }
    columns[j].rows = rows;
    mask.columns.push_back(std::move(rows));
  }
  return LrmcInstance{LrmcProblem(int(d), int(k), std::move(columns)), u_star,
                      g_star, std::move(mask)};
}

const std::vector<DatasetInfo>& dataset_registry() {
  static const std::vector<DatasetInfo> table = {
      {"a9a", 2, 32561, 123},
      {"satimage", 6, 4435, 36},
      {"covtype", 2, 581012, 54},
      {"protein", 3, 14895, 357},
      {"ijcnn1", 2, 49990, 22},
      {"epsilon", 2, 40000, 2000},
      {"YaleB", 38, 2414, 2016},
      {"AR", 100, 2600, 1200},
      {"PIE", 64, 11554, 1024},
      {"MovieLens-1M", std::nullopt, 6040, 3706},
  };
  return table;
}

std::optional<DatasetInfo> find_dataset(std::string_view name) {
  for (const DatasetInfo& info : dataset_registry()) {
    if (info.name == name) return info;
  }
  return std::nullopt;
}

}  // namespace rspider
