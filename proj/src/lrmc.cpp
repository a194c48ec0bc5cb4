#include "rspider/lrmc.hpp"

#include <cmath>
#include <limits>

#include "rspider/errors.hpp"
#include "rspider/tolerances.hpp"

namespace rspider {

LrmcProblem::LrmcProblem(int d, int k, std::vector<LrmcColumn> columns,
                         bool regularize)
    : kind_(ManifoldKind::Grassmann(d, k)),
      columns_(std::move(columns)),
      regularize_(regularize) {
  if (columns_.empty()) throw ContractError("lrmc: no columns");
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    const LrmcColumn& col = columns_[c];
    if (static_cast<Eigen::Index>(col.rows.size()) != col.values.size()) {
      throw DimensionError("lrmc: column " + std::to_string(c) +
                           " has mismatched rows/values");
    }
    if (col.rows.size() < static_cast<std::size_t>(k)) {
      throw ContractError("lrmc: column " + std::to_string(c) +
                          " has fewer than k observations");
    }
    for (std::size_t j = 0; j < col.rows.size(); ++j) {
      if (col.rows[j] < 0 || col.rows[j] >= d ||
          (j > 0 && col.rows[j] <= col.rows[j - 1])) {
        throw ContractError("lrmc: column " + std::to_string(c) +
                            " has invalid or unsorted row indices");
      }
    }
  }
}

LrmcProblem::ColumnFit LrmcProblem::fit_column(std::size_t i,
                                               const ManifoldPoint& x) const {
  check_index(i);
  const LrmcColumn& col = columns_[i];
  const Matrix& u = x.coords();
  const auto m = static_cast<Eigen::Index>(col.rows.size());
  Matrix restricted(m, u.cols());
  for (Eigen::Index r = 0; r < m; ++r) restricted.row(r) = u.row(col.rows[r]);

  Matrix normal = restricted.transpose() * restricted;
  const Vector rhs = restricted.transpose() * col.values;
  Eigen::LDLT<Matrix> ldlt(normal);
  const Vector pivots = ldlt.vectorD();
  const double largest = pivots.cwiseAbs().maxCoeff();
  const bool deficient = ldlt.info() != Eigen::Success ||
                         pivots.minCoeff() <= tol::kRankDeficientPivot * largest;
  if (deficient) {
    if (!regularize_) {
      throw SolverError("lrmc: column " + std::to_string(i) +
                        " restricted system is rank deficient");
    }
    normal.diagonal().array() += tol::kLeastSquaresRidge;
    ldlt.compute(normal);
  }
  ColumnFit fit;
  fit.coefficients = ldlt.solve(rhs);
  fit.residual = col.values - restricted * fit.coefficients;
  return fit;
}

double LrmcProblem::component_loss(std::size_t i, const ManifoldPoint& x) const {
  return fit_column(i, x).residual.squaredNorm();
}

Matrix LrmcProblem::component_egrad(std::size_t i,
                                    const ManifoldPoint& x) const {
  const ColumnFit fit = fit_column(i, x);
  const LrmcColumn& col = columns_[i];
  Matrix g = Matrix::Zero(x.coords().rows(), x.coords().cols());
  for (std::size_t r = 0; r < col.rows.size(); ++r) {
    g.row(col.rows[r]) =
        -2.0 * fit.residual(static_cast<Eigen::Index>(r)) *
        fit.coefficients.transpose();
  }
  return g;
}

Matrix LrmcProblem::zero_filled() const {
  Matrix a = Matrix::Zero(kind_.ambient_dim(), static_cast<Eigen::Index>(size()));
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    const LrmcColumn& col = columns_[c];
    for (std::size_t r = 0; r < col.rows.size(); ++r) {
      a(col.rows[r], static_cast<Eigen::Index>(c)) =
          col.values(static_cast<Eigen::Index>(r));
    }
  }
  return a;
}

ReferenceOptimum lrmc_reference_optimum(const LrmcProblem& problem,
                                        const ReferenceOptimumOptions& options) {
  const ManifoldKind& kind = problem.manifold();
  auto spectral_start = [&] {
    Eigen::BDCSVD<Matrix> svd(problem.zero_filled(), Eigen::ComputeThinU);
    return ManifoldPoint::from_ambient(
        kind, svd.matrixU().leftCols(kind.subspace_dim()));
  };
  ManifoldPoint x = options.initial ? *options.initial : spectral_start();

  const double frame_norm = std::sqrt(static_cast<double>(kind.subspace_dim()));
  double value = problem.full_loss(x);
  TangentVector grad = problem.full_grad(x);
  double step = 1.0;
  constexpr double kArmijo = 1e-4;

  for (std::size_t it = 0; it < options.max_iters; ++it) {
    const double gnorm = norm(grad);
    if (gnorm / frame_norm <= options.relative_grad_tol) {
      return {value, x, it};
    }
    bool accepted = false;
    for (double t = step; t > 1e-20 && !accepted; t *= 0.5) {
      ManifoldPoint trial = exp_map(x, (-t) * grad);
      const double trial_value = problem.full_loss(trial);
      TangentVector trial_grad = TangentVector::zero(trial);
      if (trial_value <= value - kArmijo * t * gnorm * gnorm) {
        trial_grad = problem.full_grad(trial);
        accepted = true;
      } else if (std::abs(trial_value - value) <=
                 1e-14 * std::max(std::abs(value),
                                  std::numeric_limits<double>::min())) {
        // Near machine precision the sufficient-decrease test cannot resolve
        // the change in value; accept any step that still shrinks the gradient.
        trial_grad = problem.full_grad(trial);
        accepted = norm(trial_grad) < gnorm;
      }
      if (accepted) {
        x = std::move(trial);
        value = trial_value;
        grad = std::move(trial_grad);
        step = 2.0 * t;
      }
    }
    if (!accepted) {
      throw ConvergenceError("lrmc_reference_optimum: line search stalled",
                             value);
    }
  }
  throw ConvergenceError("lrmc_reference_optimum: iteration cap reached", value);
}

}  // namespace rspider
