#pragma once

#include <optional>
#include <vector>

#include "rspider/problem.hpp"

namespace rspider::oracle {

// Reference implementations used to check the library. They avoid the
// library's geometry code (exp/log/transport/projection) and use plain loops.

struct FdConfig {
  double step = 1e-5;
  std::size_t directions = 5;
};

/// Central difference (f(c(t)) - f(c(-t))) / 2t along a curve with c(0) = x,
/// c'(0) = v: polar retraction on Grassmann, normalization on the sphere,
/// a straight line in Euclidean space. Requires ||v|| = 1. With `component`
/// only that f_i is differentiated.
double fd_directional(const Problem& problem, const ManifoldPoint& x,
                      const TangentVector& v, const FdConfig& cfg = {},
                      std::optional<std::size_t> component = std::nullopt);

struct GradientCheck {
  double max_relative_error = 0.0;
  std::vector<double> relative_errors;  // |fd - <g, v>| / max(1, |<g, v>|)
};

/// Compares problem.component_grad / full_grad against fd_directional along
/// cfg.directions random unit tangents.
GradientCheck gradient_check(const Problem& problem, const ManifoldPoint& x,
                             Rng& rng, const FdConfig& cfg = {},
                             std::optional<std::size_t> component = std::nullopt);

/// (1/n) sum_i of the projected ambient component gradients; charges n.
Matrix full_gradient(const Problem& problem, const ManifoldPoint& x,
                     IfoCounter* ifo = nullptr);

/// Tangent projection written out per manifold.
Matrix project(const ManifoldPoint& x, const Matrix& ambient);

/// Parallel transport along the minimizing geodesic, from the textbook
/// geodesic formulas with JacobiSVD.
Matrix transport(const ManifoldPoint& x, const ManifoldPoint& z,
                 const Matrix& v);

/// Exact E[recurse] for |S2| = 1 by enumerating every index:
/// (1/n) sum_i [g_i(x_cur) - P(g_i(x_prev) - v_prev)]. Requires n <= 64.
Matrix exhaustive_expectation(const Problem& problem, const ManifoldPoint& x_prev,
                              const ManifoldPoint& x_cur, const Matrix& v_prev);

/// -(1/n) sum of the k largest squared singular values of the sample matrix.
double kpca_optimum_svd(const Matrix& samples, int k);

}  // namespace rspider::oracle
