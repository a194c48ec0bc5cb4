#include "rspider/quadratic.hpp"

#include <random>

#include "rspider/errors.hpp"

namespace rspider {

QuadraticProblem::QuadraticProblem(std::vector<Matrix> hessians,
                                   std::vector<Vector> linear)
    : kind_(ManifoldKind::Euclidean(
          hessians.empty() ? 1 : static_cast<int>(hessians.front().rows()))),
      hessians_(std::move(hessians)),
      linear_(std::move(linear)) {
  if (hessians_.empty()) throw ContractError("quadratic: no components");
  if (hessians_.size() != linear_.size()) {
    throw DimensionError("quadratic: hessian/linear term count mismatch");
  }
  const auto d = kind_.rows();
  mean_hessian_ = Matrix::Zero(d, d);
  mean_linear_ = Vector::Zero(d);
  for (std::size_t i = 0; i < hessians_.size(); ++i) {
    if (hessians_[i].rows() != d || hessians_[i].cols() != d ||
        linear_[i].size() != d) {
      throw DimensionError("quadratic: component " + std::to_string(i) +
                           " has the wrong shape");
    }
    mean_hessian_ += hessians_[i];
    mean_linear_ += linear_[i];
  }
  mean_hessian_ /= static_cast<double>(hessians_.size());
  mean_linear_ /= static_cast<double>(hessians_.size());
}

double QuadraticProblem::component_loss(std::size_t i,
                                        const ManifoldPoint& x) const {
  check_index(i);
  const auto v = x.coords().col(0);
  return 0.5 * v.dot(hessians_[i] * v) + linear_[i].dot(v);
}

Matrix QuadraticProblem::component_egrad(std::size_t i,
                                         const ManifoldPoint& x) const {
  check_index(i);
  return hessians_[i] * x.coords() + linear_[i];
}

double QuadraticProblem::strong_convexity() const {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(mean_hessian_,
                                            Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

double QuadraticProblem::max_component_curvature() const {
  double best = 0.0;
  for (const Matrix& a : hessians_) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(a, Eigen::EigenvaluesOnly);
    best = std::max(best, eig.eigenvalues().cwiseAbs().maxCoeff());
  }
  return best;
}

std::optional<Vector> QuadraticProblem::minimizer() const {
  if (strong_convexity() <= 0.0) return std::nullopt;
  return Vector(mean_hessian_.llt().solve(-mean_linear_));
}

std::optional<double> QuadraticProblem::optimum() const {
  const auto x = minimizer();
  if (!x) return std::nullopt;
  return 0.5 * mean_linear_.dot(*x);
}

QuadraticProblem synth_quadratic(std::size_t n, int d, double mu,
                                 std::uint64_t seed) {
  if (n == 0 || d < 1) throw DimensionError("synth_quadratic: need n, d >= 1");
  if (!(mu > 0.0)) throw ContractError("synth_quadratic: mu must be positive");
  Rng rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<Matrix> hessians;
  std::vector<Vector> linear;
  for (std::size_t i = 0; i < n; ++i) {
    Matrix g(d, d);
    for (int c = 0; c < d; ++c)
      for (int r = 0; r < d; ++r) g(r, c) = gauss(rng);
    hessians.push_back(mu * Matrix::Identity(d, d) + g * g.transpose() / d);
    Vector b(d);
    for (int r = 0; r < d; ++r) b(r) = gauss(rng);
    linear.push_back(b);
  }
  return QuadraticProblem(std::move(hessians), std::move(linear));
}

}  // namespace rspider
