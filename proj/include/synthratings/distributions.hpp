#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "synthratings/clustering.hpp"
#include "synthratings/interaction_set.hpp"

namespace synthratings {

/// Discrete distribution over non-negative integer outcomes, stored as exact
/// counts. Support is ascending and holds only outcomes with a positive count.
class EmpiricalDistribution {
 public:
  EmpiricalDistribution() = default;

  /// Zero counts are dropped; duplicate outcomes are merged.
  static EmpiricalDistribution from_counts(std::span<const std::uint32_t> outcomes,
                                           std::span<const std::uint64_t> counts);
  static EmpiricalDistribution from_map(const std::map<std::uint32_t, std::uint64_t>& counts);

  std::span<const std::uint32_t> support() const noexcept { return support_; }
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }
  /// Running sums of counts; cumulative()[i] = counts()[0] + ... + counts()[i].
  std::span<const std::uint64_t> cumulative() const noexcept { return cumulative_; }
  std::uint64_t total() const noexcept { return cumulative_.empty() ? 0 : cumulative_.back(); }
  std::size_t size() const noexcept { return support_.size(); }
  bool empty() const noexcept { return support_.empty(); }

  double weight(std::size_t index) const noexcept {
    return static_cast<double>(counts_[index]) / static_cast<double>(total());
  }
  std::vector<double> weights() const;

  /// Sum of outcome x count; for a ratings-per-user table this is the number of ratings.
  std::uint64_t weighted_outcome_sum() const noexcept;

  friend bool operator==(const EmpiricalDistribution&, const EmpiricalDistribution&) = default;

 private:
  std::vector<std::uint32_t> support_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> cumulative_;
};

/// Everything generation needs: users per cluster, ratings-per-user counts
/// per cluster and item rating mass per cluster.
struct BehaviorModel {
  static constexpr const char* kFormatTag = "behavior-model/1";

  std::size_t k = 0;
  EmpiricalDistribution cluster_dist;
  std::vector<EmpiricalDistribution> ratings_per_user;
  std::vector<EmpiricalDistribution> item_dist;
  std::vector<std::string> item_ids;
  std::size_t reference_users = 0;
  std::size_t reference_ratings = 0;

  /// The single-community model; identical to learning with k = 1.
  BehaviorModel collapsed() const;

  friend bool operator==(const BehaviorModel&, const BehaviorModel&) = default;
};

EmpiricalDistribution learn_cluster_dist(const ClusterModel& model);
EmpiricalDistribution learn_ratings_per_user(const InteractionSet& ds, const ClusterModel& model, std::size_t cluster);
EmpiricalDistribution learn_item_dist(const InteractionSet& ds, const ClusterModel& model, std::size_t cluster);

/// Per-user interaction counts of the users in `cluster`, in user order. This
/// is the per-user view of learn_ratings_per_user.
std::vector<std::uint32_t> cluster_user_counts(const InteractionSet& ds, const ClusterModel& model,
                                               std::size_t cluster);

/// Throws ArgumentError when `model` was not fitted on a dataset of this shape.
BehaviorModel learn(const InteractionSet& ds, const ClusterModel& model);

void write_behavior_model(std::ostream& out, const BehaviorModel& model);
/// Throws ParseError on malformed content or an unknown format tag.
BehaviorModel read_behavior_model(std::istream& in);

}  // namespace synthratings
