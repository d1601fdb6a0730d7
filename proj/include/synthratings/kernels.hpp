#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP version and a plain
// serial reference written for clarity; the reference is what the tests and
// the benchmark compare against. The OpenMP versions produce bit-identical
// results for any thread count because each output element is computed by
// exactly one iteration with a fixed summation order.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "synthratings/dense.hpp"
#include "synthratings/interaction_set.hpp"

namespace synthratings::kernels {

inline constexpr std::uint32_t kNoCluster = 0xffffffffu;

/// Nearest-centroid assignment over binary user rows.
/// `centroids_by_item` is item-major (item_count x k); `sqnorms[c]` is the
/// squared norm of centroid c. On entry `assignment[u]` is the current cluster
/// or kNoCluster; a user keeps its current cluster when it is among the
/// nearest, otherwise ties go to the lowest index. Writes the squared distance
/// to the chosen centroid into `distance` and returns the number of changes.
std::size_t assign_nearest(const UserItemMatrix& users, const DenseMatrix& centroids_by_item,
                           std::span<const double> sqnorms, std::span<std::uint32_t> assignment,
                           std::span<double> distance);

/// Same contract, dense distances with one thread.
std::size_t assign_nearest_reference(const UserItemMatrix& users, const DenseMatrix& centroids_by_item,
                                     std::span<const double> sqnorms, std::span<std::uint32_t> assignment,
                                     std::span<double> distance);

/// Squared Hamming distance |a| + |b| - 2|a & b| from one binary row to all users.
void hamming_to_all(const UserItemMatrix& users, const UserItemMatrix& by_item, UserIndex from,
                    std::span<std::uint64_t> out);

struct Neighbor {
  UserIndex user;
  double similarity;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Top-k cosine neighbors of every user (excluding itself, similarity > 0),
/// ordered by similarity descending then user index ascending.
std::vector<std::vector<Neighbor>> cosine_neighbors(const UserItemMatrix& users, std::size_t k);
std::vector<std::vector<Neighbor>> cosine_neighbors_reference(const UserItemMatrix& users, std::size_t k);

/// One alternating-least-squares half step for implicit feedback with
/// confidence 1 + alpha on observed cells: for each row r of `observed`,
/// solved[r] = argmin_x sum_j c_rj (p_rj - x.y_j)^2 + lambda |x|^2 with y = fixed.
void als_half_step(const UserItemMatrix& observed, const DenseMatrix& fixed, double alpha, double lambda,
                   DenseMatrix& solved);

/// Builds every normal equation densely over all columns.
void als_half_step_reference(const UserItemMatrix& observed, const DenseMatrix& fixed, double alpha,
                             double lambda, DenseMatrix& solved);

}  // namespace synthratings::kernels
