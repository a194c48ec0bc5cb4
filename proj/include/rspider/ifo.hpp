#pragma once

#include <cstdint>

namespace rspider {

/// Counts incremental first-order oracle calls: one per retrieval of a
/// component's (value, gradient) pair at one point.
class IfoCounter {
 public:
  void charge(std::uint64_t calls) { count_ += calls; }
  std::uint64_t count() const { return count_; }

 private:
  std::uint64_t count_ = 0;
};

}  // namespace rspider
