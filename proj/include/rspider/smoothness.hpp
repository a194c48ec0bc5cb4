#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rspider/problem.hpp"

namespace rspider {

struct SmoothnessEstimates {
  double lipschitz = 0.0;         // L_hat
  double sigma = 0.0;             // sigma_hat
  std::optional<double> tau;      // gradient-dominance estimate, needs f*
};

struct SmoothnessOptions {
  std::size_t sample_count = 256;
  // Probe pairs are (x, exp(x, v)) with ||v|| drawn uniformly in (0, max_step].
  double max_step = 0.1;
  // Components examined per probe; all of them when n is at most this.
  std::size_t max_components = 1024;
  std::uint64_t seed = 0;
  // Extra points that must be covered: sigma is evaluated at each of them and
  // the Lipschitz ratio along each consecutive pair.
  std::vector<ManifoldPoint> anchors;
};

/// Empirical L_hat = max ||grad f_i(x) - P_{y->x} grad f_i(y)|| / d(x, y) over
/// probe pairs and components, and sigma_hat = max over probe points of
/// sqrt((1/n) sum_i ||grad f_i(x) - grad f(x)||^2). Probes are generated
/// sequentially from the seed, so a larger sample_count examines a superset.
SmoothnessEstimates estimate_smoothness(const Problem& problem,
                                        const SmoothnessOptions& options = {});

}  // namespace rspider
