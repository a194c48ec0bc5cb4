#pragma once

#include <vector>

#include "rspider/problem.hpp"

namespace rspider {

/// Observed entries of one column of the data matrix. Row indices are
/// 0-based and strictly increasing.
struct LrmcColumn {
  std::vector<int> rows;
  Vector values;
};

/// Low-rank matrix completion on Grassmann(d, k). Component i is column i:
///
///   f_i(U) = min_g || P_Omega_i(a_i) - P_Omega_i(U g) ||^2,
///
/// with the coefficient vector g solved in closed form by least squares on
/// the observed rows. By the envelope property the ambient gradient is
/// -2 P_Omega_i(r_i) g_i^T with r_i the residual at the optimal g_i.
class LrmcProblem : public Problem {
 public:
  /// With `regularize`, rank-deficient restricted systems get a small ridge
  /// term; otherwise they raise SolverError.
  LrmcProblem(int d, int k, std::vector<LrmcColumn> columns,
              bool regularize = true);

  const ManifoldKind& manifold() const override { return kind_; }
  std::size_t size() const override { return columns_.size(); }
  std::string name() const override { return "lrmc"; }

  double component_loss(std::size_t i, const ManifoldPoint& x) const override;
  Matrix component_egrad(std::size_t i, const ManifoldPoint& x) const override;

  struct ColumnFit {
    Vector coefficients;
    Vector residual;  // on the observed rows, in `rows` order
  };
  ColumnFit fit_column(std::size_t i, const ManifoldPoint& x) const;

  const std::vector<LrmcColumn>& columns() const { return columns_; }
  /// Zero-filled d x n data matrix.
  Matrix zero_filled() const;

 private:
  ManifoldKind kind_;
  std::vector<LrmcColumn> columns_;
  bool regularize_;
};

struct ReferenceOptimumOptions {
  std::size_t max_iters = 1'000'000;
  // Stop once ||grad f(U)|| / ||U||_F falls to this value.
  double relative_grad_tol = 1e-8;
  std::optional<ManifoldPoint> initial;
};

struct ReferenceOptimum {
  double value;
  ManifoldPoint point;
  std::size_t iterations;
};

/// Riemannian gradient descent with Armijo backtracking, started from the
/// top-k left singular vectors of the zero-filled data unless an initial point
/// is given. Deterministic. Throws ConvergenceError at the iteration cap.
ReferenceOptimum lrmc_reference_optimum(const LrmcProblem& problem,
                                        const ReferenceOptimumOptions& options = {});

}  // namespace rspider
