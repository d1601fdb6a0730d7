#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <boost/math/distributions/chi_squared.hpp>

namespace synthratings::testing {

Pairs toy_pairs() {
  return {{"u0", "i0"}, {"u0", "i1"}, {"u1", "i0"}, {"u1", "i1"},
          {"u2", "i1"}, {"u2", "i2"}, {"u3", "i1"}, {"u3", "i2"}};
}

InteractionSet toy_fixture() {
  const auto pairs = toy_pairs();
  return InteractionSet::build(pairs);
}

ClusterModel cluster_model_from(const UserItemMatrix& users, std::vector<std::uint32_t> assignments, std::size_t k) {
  ClusterModel m;
  m.k = k;
  m.centroids = DenseMatrix(k, users.item_count());
  std::vector<std::size_t> sizes(k, 0);
  for (UserIndex u = 0; u < users.user_count(); ++u) {
    ++sizes[assignments[u]];
    for (const ItemIndex i : users.row(u)) m.centroids(assignments[u], i) += 1.0;
  }
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < users.item_count(); ++i) {
      if (sizes[c] > 0) m.centroids(c, i) /= static_cast<double>(sizes[c]);
    }
  }
  m.assignments = std::move(assignments);
  m.inertia = compute_inertia(users, m.assignments, m.centroids);
  m.inertia_history = {m.inertia};
  return m;
}

Pairs random_pairs(Rng& rng, std::size_t users, std::size_t items, std::size_t max_per_user) {
  Pairs pairs;
  for (std::size_t u = 0; u < users; ++u) {
    const std::size_t n = 1 + rng.below(max_per_user);
    for (std::size_t d = 0; d < n; ++d) {
      pairs.emplace_back("u" + std::to_string(u), "i" + std::to_string(rng.below(items)));
    }
  }
  // Shuffle so first-seen order differs from numeric order.
  for (std::size_t i = pairs.size(); i > 1; --i) std::swap(pairs[i - 1], pairs[rng.below(i)]);
  return pairs;
}

InteractionSet planted_dataset(std::uint64_t seed, std::size_t users, std::size_t items, std::size_t communities,
                               double mean_ratings) {
  Rng rng(seed);
  // Global Zipf popularity, then each community boosts its own random slice of the catalog.
  std::vector<double> base(items);
  for (std::size_t i = 0; i < items; ++i) base[i] = 1.0 / std::pow(static_cast<double>(i + 1), 0.9);
  std::vector<std::vector<double>> prefs(communities, base);
  const std::size_t slice = std::max<std::size_t>(1, items / communities);
  for (std::size_t c = 0; c < communities; ++c) {
    for (std::size_t d = 0; d < 2 * slice; ++d) prefs[c][rng.below(items)] += 0.5;
  }
  InteractionSet::Builder builder;
  std::vector<std::uint8_t> taken(items);
  for (std::size_t u = 0; u < users; ++u) {
    const auto& w = prefs[rng.below(communities)];
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    const double draw = std::exp(std::log(mean_ratings) - 0.5 + rng.normal());
    const auto count = std::clamp<std::size_t>(static_cast<std::size_t>(draw), 1, items / 2);
    std::fill(taken.begin(), taken.end(), 0);
    for (std::size_t got = 0; got < count;) {
      double r = rng.uniform() * total;
      std::size_t i = 0;
      while (i + 1 < items && r >= w[i]) r -= w[i++];
      if (taken[i]) continue;
      taken[i] = 1;
      ++got;
      builder.add("user" + std::to_string(u), "item" + std::to_string(i));
    }
  }
  return std::move(builder).finish();
}

double chi_square_sf(double statistic, double dof) {
  const boost::math::chi_squared_distribution<double> dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

double chi_square_pvalue(const std::vector<std::uint64_t>& observed, const std::vector<double>& expected) {
  const double n = static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = n * expected[i];
    const double d = static_cast<double>(observed[i]) - e;
    stat += d * d / e;
  }
  return chi_square_sf(stat, static_cast<double>(observed.size() - 1));
}

NaiveTables naive_tables(const Pairs& pairs, const std::map<std::string, std::uint32_t>& cluster_of_user,
                         std::size_t k) {
  std::set<std::pair<std::string, std::string>> unique(pairs.begin(), pairs.end());
  std::map<std::string, std::uint64_t> per_user;
  NaiveTables t;
  t.count_histogram.resize(k);
  t.item_counts.resize(k);
  for (const auto& [user, item] : unique) {
    ++per_user[user];
    ++t.item_counts[cluster_of_user.at(user)][item];
  }
  for (const auto& [user, n] : per_user) {
    const auto c = cluster_of_user.at(user);
    ++t.users_per_cluster[c];
    ++t.count_histogram[c][static_cast<std::uint32_t>(n)];
  }
  return t;
}

namespace {
void enumerate(const std::vector<double>& w, std::size_t draws, std::vector<std::uint32_t>& path,
               std::vector<bool>& used, double prob, std::map<std::vector<std::uint32_t>, double>& out) {
  if (path.size() == draws) {
    auto key = path;
    std::sort(key.begin(), key.end());
    out[key] += prob;
    return;
  }
  double remaining = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!used[i]) remaining += w[i];
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    path.push_back(static_cast<std::uint32_t>(i));
    enumerate(w, draws, path, used, prob * w[i] / remaining, out);
    path.pop_back();
    used[i] = false;
  }
}
}  // namespace

std::map<std::vector<std::uint32_t>, double> exact_set_probabilities(const std::vector<double>& weights,
                                                                     std::size_t draws) {
  std::map<std::vector<std::uint32_t>, double> out;
  std::vector<std::uint32_t> path;
  std::vector<bool> used(weights.size(), false);
  enumerate(weights, draws, path, used, 1.0, out);
  return out;
}

}  // namespace synthratings::testing
