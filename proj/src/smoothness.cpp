#include "rspider/smoothness.hpp"

#include <algorithm>
#include <cmath>

#include "rspider/errors.hpp"

namespace rspider {
namespace {

std::vector<std::size_t> probe_components(std::size_t n, std::size_t cap,
                                          Rng& rng) {
  if (n <= cap) return all_indices(n);
  return sample_with_replacement(n, cap, rng);
}

double lipschitz_ratio(const Problem& problem, const ManifoldPoint& x,
                       const ManifoldPoint& y, double dist,
                       const std::vector<std::size_t>& components) {
  if (dist <= 0.0) return 0.0;
  const Transporter back(y, x);
  double best = 0.0;
  for (std::size_t i : components) {
    const TangentVector gx = problem.component_grad(i, x);
    const TangentVector gy = back.apply(problem.component_grad(i, y));
    best = std::max(best, (gx.coords() - gy.coords()).norm() / dist);
  }
  return best;
}

double gradient_spread(const Problem& problem, const ManifoldPoint& x,
                       const std::vector<std::size_t>& components) {
  std::vector<Matrix> grads;
  grads.reserve(components.size());
  Matrix mean = Matrix::Zero(x.coords().rows(), x.coords().cols());
  for (std::size_t i : components) {
    grads.push_back(problem.component_grad(i, x).coords());
    mean += grads.back();
  }
  mean /= static_cast<double>(components.size());
  double total = 0.0;
  for (const Matrix& g : grads) total += (g - mean).squaredNorm();
  return std::sqrt(total / static_cast<double>(components.size()));
}

}  // namespace

SmoothnessEstimates estimate_smoothness(const Problem& problem,
                                        const SmoothnessOptions& options) {
  if (options.sample_count < 2) {
    throw ContractError("estimate_smoothness: sample_count must be >= 2");
  }
  Rng rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::optional<double> f_star = problem.optimum();

  SmoothnessEstimates out;
  if (f_star) out.tau = 0.0;

  auto visit_point = [&](const ManifoldPoint& x,
                         const std::vector<std::size_t>& components) {
    out.sigma = std::max(out.sigma, gradient_spread(problem, x, components));
    if (f_star) {
      const double gap = problem.full_loss(x) - *f_star;
      const double g2 = std::pow(norm(problem.full_grad(x)), 2);
      if (g2 > 0.0) out.tau = std::max(*out.tau, gap / g2);
    }
  };

  for (std::size_t s = 0; s < options.sample_count; ++s) {
    const ManifoldPoint x = random_point(problem.manifold(), rng);
    const double length = options.max_step * (1.0 - unit(rng));  // (0, max]
    const TangentVector v = random_tangent(x, rng, length);
    const ManifoldPoint y = exp_map(x, v);
    const auto components =
        probe_components(problem.size(), options.max_components, rng);
    out.lipschitz = std::max(
        out.lipschitz, lipschitz_ratio(problem, x, y, norm(v), components));
    visit_point(x, components);
  }

  const auto every = all_indices(problem.size());
  for (std::size_t a = 0; a < options.anchors.size(); ++a) {
    visit_point(options.anchors[a], every);
    if (a + 1 < options.anchors.size()) {
      const ManifoldPoint& x = options.anchors[a];
      const ManifoldPoint& y = options.anchors[a + 1];
      out.lipschitz = std::max(
          out.lipschitz, lipschitz_ratio(problem, x, y, distance(x, y), every));
    }
  }
  return out;
}

}  // namespace rspider
