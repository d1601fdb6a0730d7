#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "synthratings/clustering.hpp"
#include "synthratings/distributions.hpp"
#include "synthratings/interaction_set.hpp"
#include "synthratings/random.hpp"

namespace synthratings::testing {

using Pairs = std::vector<std::pair<std::string, std::string>>;

/// u0={i0,i1}, u1={i0,i1}, u2={i1,i2}, u3={i1,i2}.
Pairs toy_pairs();
InteractionSet toy_fixture();

/// ClusterModel with the given assignments; centroids are the member means.
ClusterModel cluster_model_from(const UserItemMatrix& users, std::vector<std::uint32_t> assignments, std::size_t k);

/// Random pairs over `users` x `items`, each user holding 1..max_per_user
/// items. Duplicates may appear in the returned list.
Pairs random_pairs(Rng& rng, std::size_t users, std::size_t items, std::size_t max_per_user);

/// Users drawn from `communities` latent groups, each with its own
/// Zipf-skewed item preferences; ratings per user log-normal-ish.
InteractionSet planted_dataset(std::uint64_t seed, std::size_t users, std::size_t items, std::size_t communities,
                               double mean_ratings);

/// Upper tail probability of the chi-square distribution.
double chi_square_sf(double statistic, double dof);

/// Pearson chi-square p-value of observed counts against expected probabilities.
double chi_square_pvalue(const std::vector<std::uint64_t>& observed, const std::vector<double>& expected);

/// Frequency tables of a clustered dataset computed directly from the raw
/// pair list, without going through the library's row structures.
struct NaiveTables {
  std::map<std::uint32_t, std::uint64_t> users_per_cluster;
  std::vector<std::map<std::uint32_t, std::uint64_t>> count_histogram;  // per cluster
  std::vector<std::map<std::string, std::uint64_t>> item_counts;        // per cluster, by external id
};
NaiveTables naive_tables(const Pairs& pairs, const std::map<std::string, std::uint32_t>& cluster_of_user,
                         std::size_t k);

/// Exact probability of every unordered outcome set drawn by successive
/// renormalized draws without replacement; enumerates all ordered sequences.
std::map<std::vector<std::uint32_t>, double> exact_set_probabilities(const std::vector<double>& weights,
                                                                     std::size_t draws);

}  // namespace synthratings::testing
