#include "synthratings/distributions.hpp"

#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "synthratings/error.hpp"

namespace synthratings {
namespace {

using json = nlohmann::json;

void check_cluster(const ClusterModel& model, std::size_t cluster) {
  if (cluster >= model.k) {
    throw ArgumentError("cluster " + std::to_string(cluster) + " out of range [0, " + std::to_string(model.k) + ")");
  }
}

void check_shape(const InteractionSet& ds, const ClusterModel& model) {
  if (model.assignments.size() != ds.user_count()) {
    throw ArgumentError("cluster model covers " + std::to_string(model.assignments.size()) + " users, dataset has " +
                        std::to_string(ds.user_count()));
  }
  if (model.centroids.cols != ds.item_count() || model.centroids.rows != model.k) {
    throw ArgumentError("cluster model centroids do not match the dataset's item count");
  }
  for (const auto c : model.assignments) {
    if (c >= model.k) throw ArgumentError("cluster assignment out of range");
  }
}

json to_json(const EmpiricalDistribution& d) {
  return json{{"outcomes", std::vector<std::uint32_t>(d.support().begin(), d.support().end())},
              {"counts", std::vector<std::uint64_t>(d.counts().begin(), d.counts().end())}};
}

EmpiricalDistribution from_json(const json& j) {
  const auto outcomes = j.at("outcomes").get<std::vector<std::uint32_t>>();
  const auto counts = j.at("counts").get<std::vector<std::uint64_t>>();
  if (outcomes.size() != counts.size()) throw ParseError("outcomes and counts differ in length", 0);
  return EmpiricalDistribution::from_counts(outcomes, counts);
}

}  // namespace

EmpiricalDistribution EmpiricalDistribution::from_counts(std::span<const std::uint32_t> outcomes,
                                                         std::span<const std::uint64_t> counts) {
  if (outcomes.size() != counts.size()) throw ArgumentError("outcomes and counts differ in length");
  std::map<std::uint32_t, std::uint64_t> merged;
  for (std::size_t i = 0; i < outcomes.size(); ++i) merged[outcomes[i]] += counts[i];
  return from_map(merged);
}

EmpiricalDistribution EmpiricalDistribution::from_map(const std::map<std::uint32_t, std::uint64_t>& counts) {
  EmpiricalDistribution d;
  std::uint64_t running = 0;
  for (const auto& [outcome, count] : counts) {
    if (count == 0) continue;
    running += count;
    d.support_.push_back(outcome);
    d.counts_.push_back(count);
    d.cumulative_.push_back(running);
  }
  return d;
}

std::vector<double> EmpiricalDistribution::weights() const {
  std::vector<double> w(size());
  for (std::size_t i = 0; i < size(); ++i) w[i] = weight(i);
  return w;
}

std::uint64_t EmpiricalDistribution::weighted_outcome_sum() const noexcept {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < size(); ++i) s += static_cast<std::uint64_t>(support_[i]) * counts_[i];
  return s;
}

BehaviorModel BehaviorModel::collapsed() const {
  std::map<std::uint32_t, std::uint64_t> per_user;
  std::map<std::uint32_t, std::uint64_t> per_item;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < ratings_per_user[c].size(); ++i) {
      per_user[ratings_per_user[c].support()[i]] += ratings_per_user[c].counts()[i];
    }
    for (std::size_t i = 0; i < item_dist[c].size(); ++i) {
      per_item[item_dist[c].support()[i]] += item_dist[c].counts()[i];
    }
  }
  BehaviorModel one;
  one.k = 1;
  one.cluster_dist = EmpiricalDistribution::from_map({{0u, cluster_dist.total()}});
  one.ratings_per_user = {EmpiricalDistribution::from_map(per_user)};
  one.item_dist = {EmpiricalDistribution::from_map(per_item)};
  one.item_ids = item_ids;
  one.reference_users = reference_users;
  one.reference_ratings = reference_ratings;
  return one;
}

EmpiricalDistribution learn_cluster_dist(const ClusterModel& model) {
  std::map<std::uint32_t, std::uint64_t> counts;
  for (const auto c : model.assignments) ++counts[c];
  return EmpiricalDistribution::from_map(counts);
}

std::vector<std::uint32_t> cluster_user_counts(const InteractionSet& ds, const ClusterModel& model,
                                               std::size_t cluster) {
  check_shape(ds, model);
  check_cluster(model, cluster);
  std::vector<std::uint32_t> out;
  for (UserIndex u = 0; u < ds.user_count(); ++u) {
    if (model.assignments[u] == cluster) out.push_back(static_cast<std::uint32_t>(ds.items_of(u).size()));
  }
  return out;
}

EmpiricalDistribution learn_ratings_per_user(const InteractionSet& ds, const ClusterModel& model,
                                             std::size_t cluster) {
  std::map<std::uint32_t, std::uint64_t> counts;
  for (const auto n : cluster_user_counts(ds, model, cluster)) ++counts[n];
  return EmpiricalDistribution::from_map(counts);
}

EmpiricalDistribution learn_item_dist(const InteractionSet& ds, const ClusterModel& model, std::size_t cluster) {
  check_shape(ds, model);
  check_cluster(model, cluster);
  std::map<std::uint32_t, std::uint64_t> counts;
  for (UserIndex u = 0; u < ds.user_count(); ++u) {
    if (model.assignments[u] != cluster) continue;
    for (const ItemIndex i : ds.items_of(u)) ++counts[i];
  }
  return EmpiricalDistribution::from_map(counts);
}

BehaviorModel learn(const InteractionSet& ds, const ClusterModel& model) {
  check_shape(ds, model);
  std::vector<std::map<std::uint32_t, std::uint64_t>> per_user(model.k);
  std::vector<std::vector<std::uint64_t>> per_item(model.k, std::vector<std::uint64_t>(ds.item_count(), 0));
  for (UserIndex u = 0; u < ds.user_count(); ++u) {
    const std::size_t c = model.assignments[u];
    const auto items = ds.items_of(u);
    ++per_user[c][static_cast<std::uint32_t>(items.size())];
    for (const ItemIndex i : items) ++per_item[c][i];
  }
  BehaviorModel out;
  out.k = model.k;
  out.cluster_dist = learn_cluster_dist(model);
  out.ratings_per_user.reserve(model.k);
  out.item_dist.reserve(model.k);
  std::vector<std::uint32_t> all_items(ds.item_count());
  for (std::size_t i = 0; i < all_items.size(); ++i) all_items[i] = static_cast<std::uint32_t>(i);
  for (std::size_t c = 0; c < model.k; ++c) {
    out.ratings_per_user.push_back(EmpiricalDistribution::from_map(per_user[c]));
    out.item_dist.push_back(EmpiricalDistribution::from_counts(all_items, per_item[c]));
  }
  out.item_ids.assign(ds.item_ids().begin(), ds.item_ids().end());
  out.reference_users = ds.user_count();
  out.reference_ratings = ds.size();
  return out;
}

void write_behavior_model(std::ostream& out, const BehaviorModel& model) {
  json j;
  j["format"] = BehaviorModel::kFormatTag;
  j["k"] = model.k;
  j["reference"] = {{"users", model.reference_users}, {"ratings", model.reference_ratings}};
  j["items"] = model.item_ids;
  j["clusters"] = to_json(model.cluster_dist);
  j["ratings_per_user"] = json::array();
  j["item_counts"] = json::array();
  for (std::size_t c = 0; c < model.k; ++c) {
    j["ratings_per_user"].push_back(to_json(model.ratings_per_user[c]));
    j["item_counts"].push_back(to_json(model.item_dist[c]));
  }
  out << j.dump(1) << '\n';
}

BehaviorModel read_behavior_model(std::istream& in) {
  BehaviorModel model;
  try {
    const json j = json::parse(in);
    if (j.at("format").get<std::string>() != BehaviorModel::kFormatTag) {
      throw ParseError("unsupported model format '" + j.at("format").get<std::string>() + "'", 0);
    }
    model.k = j.at("k").get<std::size_t>();
    model.reference_users = j.at("reference").at("users").get<std::size_t>();
    model.reference_ratings = j.at("reference").at("ratings").get<std::size_t>();
    model.item_ids = j.at("items").get<std::vector<std::string>>();
    model.cluster_dist = from_json(j.at("clusters"));
    for (const auto& d : j.at("ratings_per_user")) model.ratings_per_user.push_back(from_json(d));
    for (const auto& d : j.at("item_counts")) model.item_dist.push_back(from_json(d));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed behavior model: ") + e.what(), 0);
  }
  if (model.k == 0 || model.ratings_per_user.size() != model.k || model.item_dist.size() != model.k) {
    throw ParseError("behavior model tables do not match k", 0);
  }
  for (const auto c : model.cluster_dist.support()) {
    if (c >= model.k) throw ParseError("cluster outcome out of range", 0);
  }
  for (std::size_t c = 0; c < model.k; ++c) {
    if (!model.ratings_per_user[c].empty() && model.ratings_per_user[c].support().front() < 1) {
      throw ParseError("ratings-per-user outcome below 1", 0);
    }
    if (!model.item_dist[c].empty() && model.item_dist[c].support().back() >= model.item_ids.size()) {
      throw ParseError("item outcome out of range", 0);
    }
  }
  return model;
}

}  // namespace synthratings
