#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "synthratings/kernels.hpp"
#include "synthratings/parallel.hpp"

namespace sr = synthratings;
namespace kn = synthratings::kernels;

namespace {

sr::UserItemMatrix random_matrix(std::uint64_t seed, std::size_t users, std::size_t items, std::size_t per_user) {
  sr::Rng rng(seed);
  std::vector<std::vector<sr::ItemIndex>> rows(users);
  for (auto& row : rows) {
    const std::size_t n = rng.below(per_user + 1);
    for (std::size_t d = 0; d < n; ++d) row.push_back(static_cast<sr::ItemIndex>(rng.below(items)));
  }
  return sr::UserItemMatrix::from_rows(items, std::move(rows));
}

sr::DenseMatrix random_dense(sr::Rng& rng, std::size_t rows, std::size_t cols) {
  sr::DenseMatrix m(rows, cols);
  for (auto& v : m.data) v = rng.uniform();
  return m;
}

// Restores the default thread count on scope exit.
struct ThreadLimit {
  explicit ThreadLimit(int n) { sr::set_thread_limit(n); }
  ~ThreadLimit() { sr::set_thread_limit(0); }
};

}  // namespace

TEST(Kernels, AssignMatchesReference) {
  sr::Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto users = random_matrix(100 + trial, 80, 30, 10);
    const std::size_t k = 1 + rng.below(6);
    const auto centroids = random_dense(rng, users.item_count(), k);
    std::vector<double> sqnorms(k, 0.0);
    for (std::size_t i = 0; i < users.item_count(); ++i) {
      for (std::size_t c = 0; c < k; ++c) sqnorms[c] += centroids(i, c) * centroids(i, c);
    }
    std::vector<std::uint32_t> a(users.user_count(), kn::kNoCluster), b = a;
    std::vector<double> da(users.user_count()), db(users.user_count());
    const auto ca = kn::assign_nearest(users, centroids, sqnorms, a, da);
    const auto cb = kn::assign_nearest_reference(users, centroids, sqnorms, b, db);
    EXPECT_EQ(ca, cb);
    EXPECT_EQ(a, b);
    for (std::size_t u = 0; u < a.size(); ++u) EXPECT_NEAR(da[u], db[u], 1e-9);
  }
}

TEST(Kernels, AssignKeepsCurrentClusterOnTie) {
  // Two identical centroids: a user already in cluster 1 stays there.
  const auto users = sr::UserItemMatrix::from_rows(2, {{0}, {0}});
  sr::DenseMatrix centroids(2, 2);
  centroids(0, 0) = centroids(0, 1) = 1.0;
  const std::vector<double> sqnorms{1.0, 1.0};
  std::vector<std::uint32_t> assignment{kn::kNoCluster, 1};
  std::vector<double> distance(2);
  const auto changed = kn::assign_nearest(users, centroids, sqnorms, assignment, distance);
  EXPECT_EQ(assignment, (std::vector<std::uint32_t>{0, 1}));
  EXPECT_EQ(changed, 1u);
  EXPECT_DOUBLE_EQ(distance[0], 0.0);
}

TEST(Kernels, HammingMatchesDense) {
  const auto users = random_matrix(7, 40, 25, 12);
  const auto by_item = users.transpose();
  std::vector<std::uint64_t> out(users.user_count());
  for (sr::UserIndex from = 0; from < users.user_count(); ++from) {
    kn::hamming_to_all(users, by_item, from, out);
    for (sr::UserIndex u = 0; u < users.user_count(); ++u) {
      std::uint64_t d = 0;
      for (sr::ItemIndex i = 0; i < users.item_count(); ++i) d += users.contains(from, i) != users.contains(u, i);
      EXPECT_EQ(out[u], d);
    }
  }
}

TEST(Kernels, CosineMatchesReference) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto users = random_matrix(seed, 60, 20, 8);
    for (const std::size_t k : {1u, 5u, 80u}) {
      const auto fast = kn::cosine_neighbors(users, k);
      const auto slow = kn::cosine_neighbors_reference(users, k);
      ASSERT_EQ(fast.size(), slow.size());
      for (std::size_t u = 0; u < fast.size(); ++u) {
        ASSERT_EQ(fast[u].size(), slow[u].size());
        EXPECT_LE(fast[u].size(), k);
        for (std::size_t j = 0; j < fast[u].size(); ++j) {
          EXPECT_EQ(fast[u][j].user, slow[u][j].user);
          EXPECT_NEAR(fast[u][j].similarity, slow[u][j].similarity, 1e-12);
          EXPECT_NE(fast[u][j].user, u);
        }
      }
    }
  }
}

TEST(Kernels, CosineValue) {
  // |{0,1} & {1,2}| / sqrt(2 * 2) = 0.5
  const auto users = sr::UserItemMatrix::from_rows(3, {{0, 1}, {1, 2}, {}});
  const auto nb = kn::cosine_neighbors(users, 10);
  ASSERT_EQ(nb[0].size(), 1u);
  EXPECT_EQ(nb[0][0].user, 1u);
  EXPECT_DOUBLE_EQ(nb[0][0].similarity, 0.5);
  EXPECT_TRUE(nb[2].empty());
}

TEST(Kernels, AlsMatchesReference) {
  sr::Rng rng(11);
  const auto observed = random_matrix(5, 50, 30, 9);
  const auto fixed = random_dense(rng, 30, 6);
  sr::DenseMatrix a(50, 6), b(50, 6);
  kn::als_half_step(observed, fixed, 1.0, 0.015, a);
  kn::als_half_step_reference(observed, fixed, 1.0, 0.015, b);
  for (std::size_t i = 0; i < a.data.size(); ++i) EXPECT_NEAR(a.data[i], b.data[i], 1e-9);
}

// The normal equations hold at the solution: gradient of the row objective is zero.
TEST(Kernels, AlsSolvesNormalEquations) {
  sr::Rng rng(12);
  const auto observed = random_matrix(6, 10, 8, 5);
  const auto fixed = random_dense(rng, 8, 3);
  const double alpha = 2.0, lambda = 0.1;
  sr::DenseMatrix x(10, 3);
  kn::als_half_step(observed, fixed, alpha, lambda, x);
  for (sr::UserIndex r = 0; r < 10; ++r) {
    for (std::size_t f = 0; f < 3; ++f) {
      double grad = lambda * x(r, f);
      for (sr::ItemIndex j = 0; j < 8; ++j) {
        const double p = observed.contains(r, j) ? 1.0 : 0.0;
        const double c = 1.0 + alpha * p;
        double pred = 0.0;
        for (std::size_t g = 0; g < 3; ++g) pred += x(r, g) * fixed(j, g);
        grad += c * (pred - p) * fixed(j, f);
      }
      EXPECT_NEAR(grad, 0.0, 1e-10);
    }
  }
}

TEST(Kernels, ThreadCountDoesNotChangeResults) {
  const auto users = random_matrix(21, 300, 60, 15);
  sr::Rng rng(1);
  const auto centroids = random_dense(rng, users.item_count(), 7);
  std::vector<double> sqnorms(7, 0.0);
  for (std::size_t i = 0; i < users.item_count(); ++i) {
    for (std::size_t c = 0; c < 7; ++c) sqnorms[c] += centroids(i, c) * centroids(i, c);
  }
  const auto fixed = random_dense(rng, 60, 5);

  const auto run = [&](int threads) {
    ThreadLimit limit(threads);
    std::vector<std::uint32_t> a(users.user_count(), kn::kNoCluster);
    std::vector<double> d(users.user_count());
    kn::assign_nearest(users, centroids, sqnorms, a, d);
    sr::DenseMatrix x(users.user_count(), 5);
    kn::als_half_step(users, fixed, 1.0, 0.015, x);
    return std::make_tuple(a, d, kn::cosine_neighbors(users, 10), x.data);
  };
  EXPECT_EQ(run(1), run(4));
}
