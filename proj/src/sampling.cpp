#include "synthratings/sampling.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "synthratings/error.hpp"

namespace synthratings {

std::size_t sample_index(const EmpiricalDistribution& dist, Rng& rng) {
  if (dist.empty()) throw ArgumentError("cannot sample from an empty distribution");
  const auto cumulative = dist.cumulative();
  const std::uint64_t r = rng.below(dist.total());
  return static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), r) - cumulative.begin());
}

std::uint32_t sample_categorical(const EmpiricalDistribution& dist, Rng& rng) {
  return dist.support()[sample_index(dist, rng)];
}

WeightTree::WeightTree(std::span<const std::uint64_t> weights)
    : tree_(weights.size() + 1, 0), weights_(weights.begin(), weights.end()) {
  for (std::size_t i = 0; i < weights.size(); ++i) {
    tree_[i + 1] += weights[i];
    const std::size_t parent = (i + 1) + ((i + 1) & (~(i + 1) + 1));
    if (parent <= weights.size()) tree_[parent] += tree_[i + 1];
    total_ += weights[i];
  }
  top_bit_ = weights.empty() ? 0 : std::bit_floor(weights.size());
}

std::size_t WeightTree::find(std::uint64_t target) const noexcept {
  std::size_t pos = 0;
  for (std::size_t step = top_bit_; step > 0; step >>= 1) {
    const std::size_t next = pos + step;
    if (next < tree_.size() && tree_[next] <= target) {
      pos = next;
      target -= tree_[next];
    }
  }
  return pos;  // 1-based tree position `pos` maps to 0-based index `pos`
}

void WeightTree::add(std::size_t index, std::int64_t delta) noexcept {
  for (std::size_t i = index + 1; i < tree_.size(); i += i & (~i + 1)) {
    tree_[i] = static_cast<std::uint64_t>(static_cast<std::int64_t>(tree_[i]) + delta);
  }
  total_ = static_cast<std::uint64_t>(static_cast<std::int64_t>(total_) + delta);
}

void WeightTree::set(std::size_t index, std::uint64_t weight) noexcept {
  const auto delta = static_cast<std::int64_t>(weight) - static_cast<std::int64_t>(weights_[index]);
  weights_[index] = weight;
  if (delta != 0) add(index, delta);
}

void sample_without_replacement(WeightTree& tree, std::span<const std::uint32_t> support, std::size_t n, Rng& rng,
                                std::vector<std::uint32_t>& out) {
  if (n > support.size()) {
    throw InfeasibleDraw("cannot draw " + std::to_string(n) + " distinct outcomes from a support of " +
                         std::to_string(support.size()));
  }
  out.clear();
  std::vector<std::pair<std::size_t, std::uint64_t>> removed;
  removed.reserve(n);
  for (std::size_t d = 0; d < n; ++d) {
    const std::size_t index = tree.draw(rng);
    out.push_back(support[index]);
    removed.emplace_back(index, tree.weight(index));
    tree.set(index, 0);
  }
  for (const auto& [index, weight] : removed) tree.set(index, weight);
}

std::vector<std::uint32_t> sample_without_replacement(const EmpiricalDistribution& dist, std::size_t n, Rng& rng) {
  WeightTree tree(dist.counts());
  std::vector<std::uint32_t> out;
  sample_without_replacement(tree, dist.support(), n, rng, out);
  return out;
}

}  // namespace synthratings
