#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rspider/ifo.hpp"
#include "rspider/manifold.hpp"

namespace rspider {

using Batch = std::span<const std::size_t>;

/// A finite-sum objective f(x) = (1/n) sum_i f_i(x) on a manifold.
///
/// Subclasses provide per-component losses and ambient (Euclidean) gradients;
/// Riemannian gradients are their tangent projections. Batch evaluations may
/// be overridden with vectorized code but must agree with the per-component
/// definitions. Instances are immutable and safe to share across threads.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual const ManifoldKind& manifold() const = 0;
  virtual std::size_t size() const = 0;
  virtual std::string name() const = 0;

  virtual double component_loss(std::size_t i, const ManifoldPoint& x) const = 0;
  virtual Matrix component_egrad(std::size_t i, const ManifoldPoint& x) const = 0;

  /// Mean loss over `batch` (indices may repeat).
  virtual double batch_loss(const ManifoldPoint& x, Batch batch) const;
  /// Mean ambient gradient over `batch`.
  virtual Matrix batch_egrad(const ManifoldPoint& x, Batch batch) const;

  /// Known optimal value f*, when the problem has one in closed form.
  virtual std::optional<double> optimum() const { return std::nullopt; }

  TangentVector component_grad(std::size_t i, const ManifoldPoint& x) const;

  /// Mean Riemannian gradient over `batch`; charges |batch| IFO calls.
  TangentVector batch_grad(const ManifoldPoint& x, Batch batch,
                           IfoCounter* ifo = nullptr) const;

  double full_loss(const ManifoldPoint& x) const;
  /// Exact full gradient; charges n IFO calls.
  TangentVector full_grad(const ManifoldPoint& x, IfoCounter* ifo = nullptr) const;

 protected:
  void check_index(std::size_t i) const;
  void check_batch(Batch batch) const;
};

std::vector<std::size_t> all_indices(std::size_t n);

/// `count` indices drawn uniformly with replacement from [0, n).
std::vector<std::size_t> sample_with_replacement(std::size_t n,
                                                 std::size_t count, Rng& rng);

}  // namespace rspider
