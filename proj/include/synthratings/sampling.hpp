#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "synthratings/distributions.hpp"
#include "synthratings/random.hpp"

namespace synthratings {

/// Index into dist.support(), drawn with probability proportional to its count.
std::size_t sample_index(const EmpiricalDistribution& dist, Rng& rng);

/// Outcome drawn with probability equal to its weight.
std::uint32_t sample_categorical(const EmpiricalDistribution& dist, Rng& rng);

/// Fenwick tree over integer weights: O(log n) draw, removal and restore.
class WeightTree {
 public:
  WeightTree() = default;
  explicit WeightTree(std::span<const std::uint64_t> weights);

  std::size_t size() const noexcept { return weights_.size(); }
  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t weight(std::size_t index) const noexcept { return weights_[index]; }

  /// Smallest index whose cumulative weight exceeds `target` (< total()).
  std::size_t find(std::uint64_t target) const noexcept;
  std::size_t draw(Rng& rng) const { return find(rng.below(total_)); }

  void set(std::size_t index, std::uint64_t weight) noexcept;

 private:
  void add(std::size_t index, std::int64_t delta) noexcept;

  std::vector<std::uint64_t> tree_;
  std::vector<std::uint64_t> weights_;
  std::uint64_t total_ = 0;
  std::size_t top_bit_ = 0;
};

/// Draws `n` distinct outcomes by successive weighted draws, each followed
/// by removal of the drawn outcome. Outcomes are returned in draw order.
/// Throws InfeasibleDraw when n exceeds the support size.
std::vector<std::uint32_t> sample_without_replacement(const EmpiricalDistribution& dist, std::size_t n, Rng& rng);

/// Same draw sequence on a reusable tree; the tree is restored before returning.
void sample_without_replacement(WeightTree& tree, std::span<const std::uint32_t> support, std::size_t n, Rng& rng,
                                std::vector<std::uint32_t>& out);

}  // namespace synthratings
