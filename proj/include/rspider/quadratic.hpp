#pragma once

#include <cstdint>
#include <vector>

#include "rspider/problem.hpp"

namespace rspider {

/// Euclidean finite sum with quadratic components
///   f_i(x) = 1/2 x^T A_i x + b_i^T x.
/// Serves as the closed-form sanity objective: with mean(A_i) positive
/// definite it is strongly convex, hence tau-gradient dominated with
/// tau = 1 / (2 mu), mu = lambda_min(mean(A_i)).
class QuadraticProblem : public Problem {
 public:
  QuadraticProblem(std::vector<Matrix> hessians, std::vector<Vector> linear);

  const ManifoldKind& manifold() const override { return kind_; }
  std::size_t size() const override { return hessians_.size(); }
  std::string name() const override { return "quadratic"; }

  double component_loss(std::size_t i, const ManifoldPoint& x) const override;
  Matrix component_egrad(std::size_t i, const ManifoldPoint& x) const override;

  /// Minimum value when mean(A_i) is positive definite.
  std::optional<double> optimum() const override;
  std::optional<Vector> minimizer() const;

  const Matrix& mean_hessian() const { return mean_hessian_; }
  const Vector& mean_linear() const { return mean_linear_; }
  /// max_i ||A_i||_2.
  double max_component_curvature() const;
  /// lambda_min(mean(A_i)).
  double strong_convexity() const;

 private:
  ManifoldKind kind_;
  std::vector<Matrix> hessians_;
  std::vector<Vector> linear_;
  Matrix mean_hessian_;
  Vector mean_linear_;
};

/// n components A_i = mu I + G_i G_i^T / d, b_i ~ N(0, I), so every A_i (and
/// their mean) has smallest eigenvalue at least mu.
QuadraticProblem synth_quadratic(std::size_t n, int d, double mu,
                                 std::uint64_t seed);

}  // namespace rspider
