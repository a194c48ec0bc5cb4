#include "rspider/problem.hpp"

#include <numeric>

#include "rspider/errors.hpp"

namespace rspider {

void Problem::check_index(std::size_t i) const {
  if (i >= size()) {
    throw ContractError(name() + ": component index " + std::to_string(i) +
                        " out of range [0, " + std::to_string(size()) + ")");
  }
}

void Problem::check_batch(Batch batch) const {
  if (batch.empty()) throw ContractError(name() + ": empty batch");
  for (std::size_t i : batch) check_index(i);
}

double Problem::batch_loss(const ManifoldPoint& x, Batch batch) const {
  check_batch(batch);
  double total = 0.0;
  for (std::size_t i : batch) total += component_loss(i, x);
  return total / static_cast<double>(batch.size());
}

Matrix Problem::batch_egrad(const ManifoldPoint& x, Batch batch) const {
  check_batch(batch);
  Matrix total = Matrix::Zero(x.coords().rows(), x.coords().cols());
  for (std::size_t i : batch) total += component_egrad(i, x);
  return total / static_cast<double>(batch.size());
}

TangentVector Problem::component_grad(std::size_t i,
                                      const ManifoldPoint& x) const {
  check_index(i);
  return project_tangent(x, component_egrad(i, x));
}

TangentVector Problem::batch_grad(const ManifoldPoint& x, Batch batch,
                                  IfoCounter* ifo) const {
  TangentVector g = project_tangent(x, batch_egrad(x, batch));
  if (ifo != nullptr) ifo->charge(batch.size());
  return g;
}

double Problem::full_loss(const ManifoldPoint& x) const {
  const auto idx = all_indices(size());
  return batch_loss(x, idx);
}

TangentVector Problem::full_grad(const ManifoldPoint& x, IfoCounter* ifo) const {
  const auto idx = all_indices(size());
  return batch_grad(x, idx, ifo);
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

std::vector<std::size_t> sample_with_replacement(std::size_t n,
                                                 std::size_t count, Rng& rng) {
  if (n == 0) throw ContractError("sample_with_replacement: empty population");
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::size_t> out(count);
  for (auto& i : out) i = pick(rng);
  return out;
}

}  // namespace rspider
