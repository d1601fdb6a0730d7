#include "synthratings/generator.hpp"

#include <algorithm>
#include <string>

#include "synthratings/error.hpp"
#include "synthratings/sampling.hpp"

namespace synthratings {
namespace {

constexpr std::uint64_t kUserStream = 0x7573657273ULL;

void validate(const BehaviorModel& model) {
  if (model.k == 0 || model.cluster_dist.empty()) throw ArgumentError("behavior model is empty");
  if (model.cluster_dist.support().back() >= model.k) throw ArgumentError("cluster outcome out of range");
  for (const auto c : model.cluster_dist.support()) {
    if (model.ratings_per_user[c].empty() || model.item_dist[c].empty()) {
      throw ArgumentError("cluster " + std::to_string(c) + " has users but no learned ratings");
    }
  }
}

std::vector<WeightTree> item_trees(const BehaviorModel& model) {
  std::vector<WeightTree> trees;
  trees.reserve(model.k);
  for (const auto& d : model.item_dist) trees.emplace_back(d.counts());
  return trees;
}

std::vector<std::string> synthetic_ids(std::size_t n) {
  std::vector<std::string> ids(n);
  for (std::size_t u = 0; u < n; ++u) ids[u] = "synth-" + std::to_string(u);
  return ids;
}

// One synthetic user; returns whether the rating count had to be clamped.
bool draw_user(const BehaviorModel& model, std::vector<WeightTree>& trees, Rng& rng, std::uint64_t cap,
               std::vector<std::uint32_t>& items) {
  const std::uint32_t cluster = sample_categorical(model.cluster_dist, rng);
  std::uint64_t count = sample_categorical(model.ratings_per_user[cluster], rng);
  const auto& item_dist = model.item_dist[cluster];
  bool clamped = false;
  if (count > item_dist.size()) {
    count = item_dist.size();
    clamped = true;
  }
  count = std::min(count, cap);
  sample_without_replacement(trees[cluster], item_dist.support(), static_cast<std::size_t>(count), rng, items);
  return clamped;
}

GenerationResult assemble(const BehaviorModel& model, std::vector<std::vector<ItemIndex>> rows, std::size_t clamped) {
  const std::size_t users = rows.size();
  GenerationResult result;
  result.dataset = InteractionSet::from_parts(synthetic_ids(users), model.item_ids,
                                              UserItemMatrix::from_rows(model.item_ids.size(), std::move(rows)));
  result.clamped_draws = clamped;
  return result;
}

}  // namespace

GenerationResult generate(const BehaviorModel& model, const GenerationConfig& cfg, Rng& rng) {
  if (cfg.mode == GenerationMode::Baseline) return generate_baseline(model, cfg, rng);
  if (cfg.users == 0) throw ArgumentError("number of users must be positive");
  validate(model);
  auto trees = item_trees(model);
  std::vector<std::vector<ItemIndex>> rows(cfg.users);
  std::size_t clamped = 0;
  std::vector<std::uint32_t> items;
  for (std::size_t u = 0; u < cfg.users; ++u) {
    if (draw_user(model, trees, rng, UINT64_MAX, items)) ++clamped;
    rows[u].assign(items.begin(), items.end());
  }
  return assemble(model, std::move(rows), clamped);
}

GenerationResult generate(const BehaviorModel& model, const GenerationConfig& cfg) {
  if (!cfg.per_user_streams || cfg.mode == GenerationMode::Baseline) {
    Rng rng(cfg.seed);
    return generate(model, cfg, rng);
  }
  if (cfg.users == 0) throw ArgumentError("number of users must be positive");
  validate(model);
  std::vector<std::vector<ItemIndex>> rows(cfg.users);
  std::size_t clamped = 0;
  const auto n = static_cast<std::int64_t>(cfg.users);
#pragma omp parallel reduction(+ : clamped)
  {
    auto trees = item_trees(model);
    std::vector<std::uint32_t> items;
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t u = 0; u < n; ++u) {
      Rng rng(derive_seed(cfg.seed ^ kUserStream, static_cast<std::uint64_t>(u)));
      if (draw_user(model, trees, rng, UINT64_MAX, items)) ++clamped;
      rows[static_cast<std::size_t>(u)].assign(items.begin(), items.end());
    }
  }
  return assemble(model, std::move(rows), clamped);
}

GenerationResult generate_baseline(const BehaviorModel& model, const GenerationConfig& cfg, Rng& rng) {
  if (!cfg.target_ratings.has_value()) throw ArgumentError("baseline generation requires a target rating count");
  if (*cfg.target_ratings < 1) throw ArgumentError("target rating count must be at least 1");
  validate(model);
  const BehaviorModel single = model.k == 1 ? model : model.collapsed();
  auto trees = item_trees(single);
  std::vector<std::vector<ItemIndex>> rows;
  std::size_t clamped = 0;
  std::uint64_t total = 0;
  std::vector<std::uint32_t> items;
  while (total < *cfg.target_ratings) {
    if (draw_user(single, trees, rng, *cfg.target_ratings - total, items)) ++clamped;
    total += items.size();
    rows.emplace_back(items.begin(), items.end());
  }
  return assemble(single, std::move(rows), clamped);
}

GenerationResult generate_baseline(const InteractionSet& reference, const GenerationConfig& cfg, Rng& rng) {
  if (reference.empty()) throw ArgumentError("reference dataset is empty");
  ClusterModel one;
  one.k = 1;
  one.assignments.assign(reference.user_count(), 0);
  one.centroids = DenseMatrix(1, reference.item_count());
  return generate_baseline(learn(reference, one), cfg, rng);
}

}  // namespace synthratings
