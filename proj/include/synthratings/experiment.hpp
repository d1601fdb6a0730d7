#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "synthratings/clustering.hpp"
#include "synthratings/distributions.hpp"
#include "synthratings/evaluation.hpp"
#include "synthratings/generator.hpp"
#include "synthratings/ingest.hpp"
#include "synthratings/recommenders.hpp"

namespace synthratings {

struct ExperimentConfig {
  std::filesystem::path dataset;
  SourceFormat format = SourceFormat::Canonical;
  std::optional<double> threshold;

  std::vector<std::size_t> clusters{200};
  /// Synthetic user count; defaults to the reference user count.
  std::optional<std::size_t> users;

  std::uint64_t cluster_seed = 0;
  std::uint64_t generate_seed = 0;
  std::uint64_t split_seed = 0;
  std::uint64_t fit_seed = 0;

  std::vector<Algorithm> algorithms = all_algorithms();
  std::vector<Metric> metrics{Metric::Precision, Metric::Recall, Metric::NDCG};
  std::size_t n = 10;
  double test_fraction = 0.2;
  std::size_t max_iter = 300;
  double tol = 1e-4;
  Hyperparameters hyperparameters;
  std::filesystem::path output_dir = ".";

  /// Keys: dataset, format, threshold, clusters (number or list), users,
  /// seeds {cluster, generate, split, fit}, algorithms, metrics, n,
  /// test_fraction, kmeans {max_iter, tol}, rec {<algo>: {<param>: value}},
  /// output_dir. Missing keys keep their defaults.
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::filesystem::path& path);

  SuiteOptions suite_options() const;
  KMeansOptions kmeans_options(std::size_t k) const;
};

struct LearnedModel {
  ClusterModel clusters;
  BehaviorModel behavior;
};

LearnedModel learn_behavior(const InteractionSet& reference, const KMeansOptions& options);

/// Reference, clustered synthetic and baseline synthetic versions of one
/// dataset, evaluated under identical settings.
struct ThreeWayResult {
  DatasetStats reference_stats;
  DatasetStats generated_stats;
  DatasetStats baseline_stats;
  EvalReport reference;
  EvalReport generated;
  EvalReport baseline;
};

ThreeWayResult run_three_way(const InteractionSet& reference, std::size_t k, const ExperimentConfig& cfg);

struct SweepRow {
  std::size_t k;
  Algorithm algorithm;
  Metric metric;
  double value;
};

/// For each K: learn, generate U users, evaluate. One row per (K, algorithm, metric).
std::vector<SweepRow> run_sweep(const InteractionSet& reference, const ExperimentConfig& cfg);

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

}  // namespace synthratings
