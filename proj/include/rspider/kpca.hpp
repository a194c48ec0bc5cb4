#pragma once

#include <Eigen/SparseCore>

#include "rspider/problem.hpp"

namespace rspider {

using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// k-PCA on Grassmann(d, k): f_i(U) = -||U^T a_i||^2, so minimizers span the
/// top-k eigenvectors of C = (1/n) sum_i a_i a_i^T.
///
/// Samples are stored as sparse rows; per-component work is O(nnz(a_i) k).
class KPcaProblem : public Problem {
 public:
  /// With `normalize`, rows are rescaled so that max_i ||a_i|| = 1.
  KPcaProblem(SparseRows samples, int k, bool normalize = true);
  static KPcaProblem from_dense(const Matrix& samples, int k,
                                bool normalize = true);

  const ManifoldKind& manifold() const override { return kind_; }
  std::size_t size() const override {
    return static_cast<std::size_t>(samples_.rows());
  }
  std::string name() const override { return "kpca"; }

  double component_loss(std::size_t i, const ManifoldPoint& x) const override;
  Matrix component_egrad(std::size_t i, const ManifoldPoint& x) const override;
  double batch_loss(const ManifoldPoint& x, Batch batch) const override;
  Matrix batch_egrad(const ManifoldPoint& x, Batch batch) const override;

  std::optional<double> optimum() const override;

  const SparseRows& samples() const { return samples_; }
  /// Dense sample covariance (1/n) A^T A.
  Matrix covariance() const;
  /// Frame of the top-k eigenvectors of the covariance.
  ManifoldPoint solution() const;

 private:
  SparseRows samples_;
  ManifoldKind kind_;
};

/// f* = -(sum of the k largest eigenvalues of the covariance); accepts k = d.
double kpca_optimum(const Matrix& covariance, int k);
double kpca_optimum(const KPcaProblem& problem);

}  // namespace rspider
