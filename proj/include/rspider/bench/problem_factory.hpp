#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rspider/bench/config.hpp"
#include "rspider/problem.hpp"

namespace rspider::bench {

struct BenchProblem {
  std::shared_ptr<const Problem> problem;
  std::optional<double> f_star;
  std::string f_star_source;  // "closed-form", "reference-gd", or empty
  std::vector<std::string> notes;
};

/// Builds the problem described by the [problem] section:
///   kind = kpca | lrmc | quadratic, source = synthetic | file, path, n, d, k,
///   decay, density, noise, mu, normalize, data_seed, dataset, optimum.
BenchProblem make_problem(const RunConfig& config);

/// Starting point shared by every optimizer run with this seed.
ManifoldPoint initial_point(const Problem& problem, std::uint64_t seed);

/// Wraps `inner` and scales component `index`'s ambient gradient by
/// (1 + relative_error); losses are untouched. Used to exercise gradcheck.
std::shared_ptr<const Problem> corrupt_gradient(
    std::shared_ptr<const Problem> inner, std::size_t index,
    double relative_error);

}  // namespace rspider::bench
