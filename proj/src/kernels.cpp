#include "synthratings/kernels.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace synthratings::kernels {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::uint32_t pick(std::span<const double> dist, std::uint32_t current) {
  std::uint32_t best = 0;
  for (std::uint32_t c = 1; c < dist.size(); ++c) {
    if (dist[c] < dist[best]) best = c;
  }
  if (current != kNoCluster && dist[current] <= dist[best]) return current;
  return best;
}

void assign_one(const UserItemMatrix& users, const DenseMatrix& centroids_by_item, std::span<const double> sqnorms,
                UserIndex u, std::vector<double>& acc, std::span<std::uint32_t> assignment,
                std::span<double> distance, std::size_t& changes) {
  const std::size_t k = sqnorms.size();
  std::fill(acc.begin(), acc.end(), 0.0);
  for (const ItemIndex i : users.row(u)) {
    const double* col = centroids_by_item.data.data() + static_cast<std::size_t>(i) * k;
    for (std::size_t c = 0; c < k; ++c) acc[c] += col[c];
  }
  const auto ones = static_cast<double>(users.row_size(u));
  for (std::size_t c = 0; c < k; ++c) acc[c] = std::max(0.0, sqnorms[c] + ones - 2.0 * acc[c]);
  const std::uint32_t chosen = pick(acc, assignment[u]);
  if (chosen != assignment[u]) ++changes;
  assignment[u] = chosen;
  distance[u] = acc[chosen];
}

std::vector<Neighbor> top_k(std::vector<Neighbor> candidates, std::size_t k) {
  const auto better = [](const Neighbor& a, const Neighbor& b) {
    return a.similarity > b.similarity || (a.similarity == b.similarity && a.user < b.user);
  };
  if (candidates.size() > k) {
    std::nth_element(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k), candidates.end(),
                     better);
    candidates.resize(k);
  }
  std::sort(candidates.begin(), candidates.end(), better);
  return candidates;
}

void neighbors_of(const UserItemMatrix& users, const UserItemMatrix& by_item, std::size_t k, UserIndex u,
                  std::vector<std::uint32_t>& co, std::vector<UserIndex>& touched, std::vector<Neighbor>& out) {
  touched.clear();
  for (const ItemIndex i : users.row(u)) {
    for (const UserIndex v : by_item.row(i)) {
      if (v == u) continue;
      if (co[v]++ == 0) touched.push_back(v);
    }
  }
  std::vector<Neighbor> candidates;
  candidates.reserve(touched.size());
  const auto nu = static_cast<double>(users.row_size(u));
  for (const UserIndex v : touched) {
    const double sim = static_cast<double>(co[v]) / std::sqrt(nu * static_cast<double>(users.row_size(v)));
    candidates.push_back({v, sim});
    co[v] = 0;
  }
  out = top_k(std::move(candidates), k);
}

RowMatrix gram(const DenseMatrix& fixed) {
  const auto f = static_cast<Eigen::Index>(fixed.cols);
  RowMatrix g = RowMatrix::Zero(f, f);
  for (std::size_t j = 0; j < fixed.rows; ++j) {
    const Eigen::Map<const Eigen::VectorXd> y(fixed.data.data() + j * fixed.cols, f);
    g.noalias() += y * y.transpose();
  }
  return g;
}

void solve_row(const UserItemMatrix& observed, const DenseMatrix& fixed, const RowMatrix& base, double alpha,
               std::size_t r, DenseMatrix& solved) {
  const auto f = static_cast<Eigen::Index>(fixed.cols);
  RowMatrix a = base;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(f);
  for (const ItemIndex j : observed.row(static_cast<UserIndex>(r))) {
    const Eigen::Map<const Eigen::VectorXd> y(fixed.data.data() + static_cast<std::size_t>(j) * fixed.cols, f);
    a.noalias() += alpha * (y * y.transpose());
    b.noalias() += (1.0 + alpha) * y;
  }
  Eigen::Map<Eigen::VectorXd> x(solved.data.data() + r * solved.cols, f);
  x = a.llt().solve(b);
}

}  // namespace

std::size_t assign_nearest(const UserItemMatrix& users, const DenseMatrix& centroids_by_item,
                           std::span<const double> sqnorms, std::span<std::uint32_t> assignment,
                           std::span<double> distance) {
  const auto n = static_cast<std::int64_t>(users.user_count());
  std::size_t changes = 0;
#pragma omp parallel reduction(+ : changes)
  {
    std::vector<double> acc(sqnorms.size());
#pragma omp for schedule(static)
    for (std::int64_t u = 0; u < n; ++u) {
      assign_one(users, centroids_by_item, sqnorms, static_cast<UserIndex>(u), acc, assignment, distance, changes);
    }
  }
  return changes;
}

std::size_t assign_nearest_reference(const UserItemMatrix& users, const DenseMatrix& centroids_by_item,
                                     std::span<const double> sqnorms, std::span<std::uint32_t> assignment,
                                     std::span<double> distance) {
  (void)sqnorms;
  const std::size_t k = centroids_by_item.cols;
  std::size_t changes = 0;
  std::vector<double> dist(k);
  for (UserIndex u = 0; u < users.user_count(); ++u) {
    std::vector<std::uint8_t> dense(users.item_count(), 0);
    for (const ItemIndex i : users.row(u)) dense[i] = 1;
    for (std::size_t c = 0; c < k; ++c) {
      double d = 0.0;
      for (std::size_t i = 0; i < users.item_count(); ++i) {
        const double diff = dense[i] - centroids_by_item(i, c);
        d += diff * diff;
      }
      dist[c] = d;
    }
    const std::uint32_t chosen = pick(dist, assignment[u]);
    if (chosen != assignment[u]) ++changes;
    assignment[u] = chosen;
    distance[u] = dist[chosen];
  }
  return changes;
}

void hamming_to_all(const UserItemMatrix& users, const UserItemMatrix& by_item, UserIndex from,
                    std::span<std::uint64_t> out) {
  const auto n = static_cast<std::int64_t>(users.user_count());
  const std::uint64_t from_size = users.row_size(from);
  for (std::int64_t v = 0; v < n; ++v) out[static_cast<std::size_t>(v)] = from_size + users.row_size(static_cast<UserIndex>(v));
  for (const ItemIndex i : users.row(from)) {
    for (const UserIndex v : by_item.row(i)) out[v] -= 2;
  }
}

std::vector<std::vector<Neighbor>> cosine_neighbors(const UserItemMatrix& users, std::size_t k) {
  const UserItemMatrix by_item = users.transpose();
  const auto n = static_cast<std::int64_t>(users.user_count());
  std::vector<std::vector<Neighbor>> result(users.user_count());
#pragma omp parallel
  {
    std::vector<std::uint32_t> co(users.user_count(), 0);
    std::vector<UserIndex> touched;
#pragma omp for schedule(dynamic, 32)
    for (std::int64_t u = 0; u < n; ++u) {
      neighbors_of(users, by_item, k, static_cast<UserIndex>(u), co, touched, result[static_cast<std::size_t>(u)]);
    }
  }
  return result;
}

std::vector<std::vector<Neighbor>> cosine_neighbors_reference(const UserItemMatrix& users, std::size_t k) {
  std::vector<std::vector<Neighbor>> result(users.user_count());
  for (UserIndex u = 0; u < users.user_count(); ++u) {
    std::vector<Neighbor> candidates;
    const auto a = users.row(u);
    for (UserIndex v = 0; v < users.user_count(); ++v) {
      if (v == u) continue;
      const auto b = users.row(v);
      std::size_t common = 0;
      std::size_t x = 0;
      std::size_t y = 0;
      while (x < a.size() && y < b.size()) {
        if (a[x] < b[y]) {
          ++x;
        } else if (b[y] < a[x]) {
          ++y;
        } else {
          ++common;
          ++x;
          ++y;
        }
      }
      if (common == 0) continue;
      const double sim = static_cast<double>(common) /
                         std::sqrt(static_cast<double>(a.size()) * static_cast<double>(b.size()));
      candidates.push_back({v, sim});
    }
    result[u] = top_k(std::move(candidates), k);
  }
  return result;
}

void als_half_step(const UserItemMatrix& observed, const DenseMatrix& fixed, double alpha, double lambda,
                   DenseMatrix& solved) {
  RowMatrix base = gram(fixed);
  base.diagonal().array() += lambda;
  solved = DenseMatrix(observed.user_count(), fixed.cols);
  const auto n = static_cast<std::int64_t>(observed.user_count());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t r = 0; r < n; ++r) solve_row(observed, fixed, base, alpha, static_cast<std::size_t>(r), solved);
}

void als_half_step_reference(const UserItemMatrix& observed, const DenseMatrix& fixed, double alpha,
                             double lambda, DenseMatrix& solved) {
  const auto f = static_cast<Eigen::Index>(fixed.cols);
  solved = DenseMatrix(observed.user_count(), fixed.cols);
  for (UserIndex r = 0; r < observed.user_count(); ++r) {
    RowMatrix a = RowMatrix::Zero(f, f);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(f);
    for (std::size_t j = 0; j < fixed.rows; ++j) {
      const bool seen = observed.contains(r, static_cast<ItemIndex>(j));
      const double confidence = seen ? 1.0 + alpha : 1.0;
      const Eigen::Map<const Eigen::VectorXd> y(fixed.data.data() + j * fixed.cols, f);
      a.noalias() += confidence * (y * y.transpose());
      if (seen) b.noalias() += confidence * y;
    }
    a.diagonal().array() += lambda;
    Eigen::Map<Eigen::VectorXd> x(solved.data.data() + static_cast<std::size_t>(r) * solved.cols, f);
    x = a.llt().solve(b);
  }
}

}  // namespace synthratings::kernels
