#include "rspider/kpca.hpp"

#include <algorithm>

#include "rspider/errors.hpp"

namespace rspider {
namespace {

SparseRows normalized(SparseRows rows) {
  double max_norm = 0.0;
  for (Eigen::Index i = 0; i < rows.outerSize(); ++i) {
    double sq = 0.0;
    for (SparseRows::InnerIterator it(rows, i); it; ++it) {
      sq += it.value() * it.value();
    }
    max_norm = std::max(max_norm, std::sqrt(sq));
  }
  if (max_norm > 0.0) rows /= max_norm;
  return rows;
}

// Projection coefficients U^T a_i as a row vector.
Eigen::RowVectorXd project_row(const SparseRows& rows, std::size_t i,
                               const Matrix& u) {
  Eigen::RowVectorXd coeff = Eigen::RowVectorXd::Zero(u.cols());
  for (SparseRows::InnerIterator it(rows, static_cast<Eigen::Index>(i)); it;
       ++it) {
    coeff += it.value() * u.row(it.index());
  }
  return coeff;
}

}  // namespace

KPcaProblem::KPcaProblem(SparseRows samples, int k, bool normalize)
    : samples_(normalize ? normalized(std::move(samples)) : std::move(samples)),
      kind_(ManifoldKind::Grassmann(static_cast<int>(samples_.cols()), k)) {
  if (samples_.rows() == 0) throw ContractError("kpca: no samples");
  samples_.makeCompressed();
}

KPcaProblem KPcaProblem::from_dense(const Matrix& samples, int k,
                                    bool normalize) {
  return KPcaProblem(samples.sparseView(0.0, 0.0), k, normalize);
}

double KPcaProblem::component_loss(std::size_t i, const ManifoldPoint& x) const {
  check_index(i);
  return -project_row(samples_, i, x.coords()).squaredNorm();
}

Matrix KPcaProblem::component_egrad(std::size_t i,
                                    const ManifoldPoint& x) const {
  check_index(i);
  const Eigen::RowVectorXd coeff = project_row(samples_, i, x.coords());
  Matrix g = Matrix::Zero(x.coords().rows(), x.coords().cols());
  for (SparseRows::InnerIterator it(samples_, static_cast<Eigen::Index>(i)); it;
       ++it) {
    g.row(it.index()) = -2.0 * it.value() * coeff;
  }
  return g;
}

double KPcaProblem::batch_loss(const ManifoldPoint& x, Batch batch) const {
  check_batch(batch);
  double total = 0.0;
  for (std::size_t i : batch) {
    total -= project_row(samples_, i, x.coords()).squaredNorm();
  }
  return total / static_cast<double>(batch.size());
}

Matrix KPcaProblem::batch_egrad(const ManifoldPoint& x, Batch batch) const {
  check_batch(batch);
  const Matrix& u = x.coords();
  Matrix g = Matrix::Zero(u.rows(), u.cols());
  for (std::size_t i : batch) {
    const Eigen::RowVectorXd coeff = project_row(samples_, i, u);
    for (SparseRows::InnerIterator it(samples_, static_cast<Eigen::Index>(i));
         it; ++it) {
      g.row(it.index()).noalias() += it.value() * coeff;
    }
  }
  g *= -2.0 / static_cast<double>(batch.size());
  return g;
}

Matrix KPcaProblem::covariance() const {
  const Matrix dense = Matrix(samples_);
  return dense.transpose() * dense / static_cast<double>(samples_.rows());
}

std::optional<double> KPcaProblem::optimum() const {
  return kpca_optimum(*this);
}

ManifoldPoint KPcaProblem::solution() const {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(covariance());
  const int k = kind_.subspace_dim();
  // Eigenvalues are ascending; the top-k eigenvectors are the last k columns.
  Matrix frame = eig.eigenvectors().rightCols(k).rowwise().reverse();
  return ManifoldPoint::from_ambient(kind_, frame);
}

double kpca_optimum(const Matrix& covariance, int k) {
  if (covariance.rows() != covariance.cols()) {
    throw DimensionError("kpca_optimum: covariance must be square");
  }
  if (k < 1 || k > covariance.rows()) {
    throw ContractError("kpca_optimum: need 1 <= k <= d");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(covariance, Eigen::EigenvaluesOnly);
  return -eig.eigenvalues().tail(k).sum();
}

double kpca_optimum(const KPcaProblem& problem) {
  return kpca_optimum(problem.covariance(), problem.manifold().subspace_dim());
}

}  // namespace rspider
