#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "synthratings/dense.hpp"
#include "synthratings/interaction_set.hpp"

namespace synthratings {

struct KMeansOptions {
  std::size_t k = 1;
  std::uint64_t seed = 0;
  std::size_t max_iter = 300;
  /// Stop once no centroid moves farther than this (Euclidean).
  double tol = 1e-4;
  /// Use the serial reference kernels instead of the OpenMP ones.
  bool reference_kernels = false;
};

/// Result of K-means over the binary user rows.
struct ClusterModel {
  std::size_t k = 0;
  std::vector<std::uint32_t> assignments;
  /// k x item_count, entries in [0, 1].
  DenseMatrix centroids;
  double inertia = 0.0;
  /// Inertia after the initial assignment and after every subsequent
  /// assignment or centroid update; non-increasing.
  std::vector<double> inertia_history;
  std::size_t iterations = 0;
  bool converged = false;

  std::vector<std::size_t> cluster_sizes() const;
};

/// k-means++ seeding on squared Hamming distance; returns k distinct users.
std::vector<UserIndex> kmeanspp_seeds(const UserItemMatrix& users, std::size_t k, std::uint64_t seed);

/// Lloyd iterations from k-means++ seeds. Throws ArgumentError for an empty
/// matrix or k outside [1, user_count].
ClusterModel kmeans(const UserItemMatrix& users, const KMeansOptions& options);
ClusterModel kmeans(const InteractionSet& ds, const KMeansOptions& options);

/// Lloyd iterations starting from the given users as centroids.
ClusterModel kmeans_from_seeds(const UserItemMatrix& users, std::span<const UserIndex> seeds,
                               const KMeansOptions& options);

/// Sum of squared distances of users to their assigned centroid, computed densely.
double compute_inertia(const UserItemMatrix& users, std::span<const std::uint32_t> assignments,
                       const DenseMatrix& centroids);

}  // namespace synthratings
