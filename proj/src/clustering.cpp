#include "synthratings/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "synthratings/error.hpp"
#include "synthratings/kernels.hpp"
#include "synthratings/random.hpp"

namespace synthratings {
namespace {

constexpr std::uint64_t kSeedingStream = 0x6b6d65616e73ULL;

void validate(const UserItemMatrix& users, std::size_t k) {
  if (users.user_count() == 0) throw ArgumentError("k-means needs at least one user");
  if (k < 1 || k > users.user_count()) {
    throw ArgumentError("number of clusters must be in [1, " + std::to_string(users.user_count()) + "], got " +
                        std::to_string(k));
  }
}

class Lloyd {
 public:
  Lloyd(const UserItemMatrix& users, std::size_t k, bool reference)
      : users_(users),
        k_(k),
        reference_(reference),
        by_item_(users.item_count(), k),
        sqnorms_(k, 0.0),
        assignment_(users.user_count(), kernels::kNoCluster),
        distance_(users.user_count(), 0.0) {}

  void place_at_user(std::size_t c, UserIndex u) {
    for (std::size_t i = 0; i < users_.item_count(); ++i) by_item_(i, c) = 0.0;
    for (const ItemIndex i : users_.row(u)) by_item_(i, c) = 1.0;
    sqnorms_[c] = static_cast<double>(users_.row_size(u));
  }

  // Assigns every user, then moves users into clusters left empty until none is.
  std::size_t assign_phase() {
    std::size_t changes = 0;
    const std::size_t max_rounds = k_ + 16;
    for (std::size_t round = 0;; ++round) {
      changes += reference_ ? kernels::assign_nearest_reference(users_, by_item_, sqnorms_, assignment_, distance_)
                            : kernels::assign_nearest(users_, by_item_, sqnorms_, assignment_, distance_);
      std::vector<std::size_t> sizes(k_, 0);
      for (const auto c : assignment_) ++sizes[c];
      bool repaired = false;
      for (std::size_t c = 0; c < k_; ++c) {
        if (sizes[c] != 0) continue;
        std::size_t farthest = users_.user_count();
        for (UserIndex u = 0; u < users_.user_count(); ++u) {
          if (sizes[assignment_[u]] < 2) continue;
          if (farthest == users_.user_count() || distance_[u] > distance_[farthest]) farthest = u;
        }
        if (farthest == users_.user_count()) throw InvariantError("no donor user for an empty cluster");
        --sizes[assignment_[farthest]];
        assignment_[farthest] = static_cast<std::uint32_t>(c);
        sizes[c] = 1;
        place_at_user(c, static_cast<UserIndex>(farthest));
        distance_[farthest] = 0.0;
        ++changes;
        repaired = true;
      }
      if (!repaired) break;
      if (round >= max_rounds) throw InvariantError("empty-cluster repair did not settle");
    }
    return changes;
  }

  // Moves centroids to member means; returns the largest centroid displacement.
  double update_centroids() {
    std::vector<std::size_t> sizes(k_, 0);
    for (const auto c : assignment_) ++sizes[c];
    std::vector<std::uint32_t> counts(users_.item_count() * k_, 0);
    for (UserIndex u = 0; u < users_.user_count(); ++u) {
      const std::size_t c = assignment_[u];
      for (const ItemIndex i : users_.row(u)) ++counts[static_cast<std::size_t>(i) * k_ + c];
    }
    std::vector<double> shift(k_, 0.0);
    std::fill(sqnorms_.begin(), sqnorms_.end(), 0.0);
    for (std::size_t i = 0; i < users_.item_count(); ++i) {
      for (std::size_t c = 0; c < k_; ++c) {
        const double value = static_cast<double>(counts[i * k_ + c]) / static_cast<double>(sizes[c]);
        const double delta = value - by_item_(i, c);
        shift[c] += delta * delta;
        sqnorms_[c] += value * value;
        by_item_(i, c) = value;
      }
    }
    return std::sqrt(*std::max_element(shift.begin(), shift.end()));
  }

  double inertia() const {
    double total = 0.0;
    for (UserIndex u = 0; u < users_.user_count(); ++u) {
      const std::size_t c = assignment_[u];
      double acc = 0.0;
      for (const ItemIndex i : users_.row(u)) acc += by_item_(i, c);
      total += std::max(0.0, sqnorms_[c] + static_cast<double>(users_.row_size(u)) - 2.0 * acc);
    }
    return total;
  }

  ClusterModel finish(std::vector<double> history, std::size_t iterations, bool converged) const {
    ClusterModel model;
    model.k = k_;
    model.assignments = assignment_;
    model.centroids = DenseMatrix(k_, users_.item_count());
    for (std::size_t i = 0; i < users_.item_count(); ++i) {
      for (std::size_t c = 0; c < k_; ++c) model.centroids(c, i) = by_item_(i, c);
    }
    model.inertia = history.back();
    model.inertia_history = std::move(history);
    model.iterations = iterations;
    model.converged = converged;
    return model;
  }

 private:
  const UserItemMatrix& users_;
  std::size_t k_;
  bool reference_;
  DenseMatrix by_item_;
  std::vector<double> sqnorms_;
  std::vector<std::uint32_t> assignment_;
  std::vector<double> distance_;
};

}  // namespace

std::vector<std::size_t> ClusterModel::cluster_sizes() const {
  std::vector<std::size_t> sizes(k, 0);
  for (const auto c : assignments) ++sizes[c];
  return sizes;
}

std::vector<UserIndex> kmeanspp_seeds(const UserItemMatrix& users, std::size_t k, std::uint64_t seed) {
  validate(users, k);
  const std::size_t n = users.user_count();
  const UserItemMatrix by_item = users.transpose();
  Rng rng(derive_seed(seed, kSeedingStream));
  std::vector<UserIndex> seeds;
  seeds.reserve(k);
  std::vector<bool> chosen(n, false);
  std::vector<std::uint64_t> nearest(n);
  std::vector<std::uint64_t> scratch(n);

  const auto take = [&](UserIndex u) {
    seeds.push_back(u);
    chosen[u] = true;
    kernels::hamming_to_all(users, by_item, u, scratch);
    if (seeds.size() == 1) {
      nearest = scratch;
    } else {
      for (std::size_t v = 0; v < n; ++v) nearest[v] = std::min(nearest[v], scratch[v]);
    }
  };

  take(static_cast<UserIndex>(rng.below(n)));
  while (seeds.size() < k) {
    const std::uint64_t total = std::accumulate(nearest.begin(), nearest.end(), std::uint64_t{0});
    UserIndex next = 0;
    if (total > 0) {
      std::uint64_t r = rng.below(total);
      while (r >= nearest[next]) r -= nearest[next++];
    } else {
      // Every remaining user duplicates a seed; fall back to a uniform pick.
      std::uint64_t r = rng.below(n - seeds.size());
      for (next = 0;; ++next) {
        if (chosen[next]) continue;
        if (r-- == 0) break;
      }
    }
    take(next);
  }
  return seeds;
}

ClusterModel kmeans_from_seeds(const UserItemMatrix& users, std::span<const UserIndex> seeds,
                               const KMeansOptions& options) {
  validate(users, seeds.size());
  Lloyd lloyd(users, seeds.size(), options.reference_kernels);
  for (std::size_t c = 0; c < seeds.size(); ++c) {
    if (seeds[c] >= users.user_count()) throw ArgumentError("seed user out of range");
    lloyd.place_at_user(c, seeds[c]);
  }
  lloyd.assign_phase();
  std::vector<double> history{lloyd.inertia()};
  std::size_t iterations = 0;
  bool converged = false;
  while (iterations < options.max_iter) {
    ++iterations;
    const double shift = lloyd.update_centroids();
    history.push_back(lloyd.inertia());
    const std::size_t changes = lloyd.assign_phase();
    history.push_back(lloyd.inertia());
    if (changes == 0 || shift < options.tol) {
      converged = true;
      break;
    }
  }
  return lloyd.finish(std::move(history), iterations, converged);
}

ClusterModel kmeans(const UserItemMatrix& users, const KMeansOptions& options) {
  validate(users, options.k);
  const auto seeds = kmeanspp_seeds(users, options.k, options.seed);
  return kmeans_from_seeds(users, seeds, options);
}

ClusterModel kmeans(const InteractionSet& ds, const KMeansOptions& options) { return kmeans(ds.matrix(), options); }

double compute_inertia(const UserItemMatrix& users, std::span<const std::uint32_t> assignments,
                       const DenseMatrix& centroids) {
  double total = 0.0;
  for (UserIndex u = 0; u < users.user_count(); ++u) {
    const auto dense = SparseBinaryVector{users.item_count(), users.row(u)}.dense();
    const auto c = centroids.row(assignments[u]);
    for (std::size_t i = 0; i < dense.size(); ++i) {
      const double diff = dense[i] - c[i];
      total += diff * diff;
    }
  }
  return total;
}

}  // namespace synthratings
