#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "synthratings/interaction_set.hpp"
#include "synthratings/recommenders.hpp"

namespace synthratings {

/// Train and test views over the user/item index space of one dataset.
struct SplitPair {
  UserItemMatrix train;
  UserItemMatrix test;
  std::uint64_t seed = 0;
  double test_fraction = 0.0;
};

/// Uniformly samples round(fraction * |interactions|) interactions as test.
/// Throws ArgumentError unless 0 < fraction < 1.
SplitPair random_split(const InteractionSet& ds, double fraction, std::uint64_t seed);

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double ndcg = 0.0;
  std::size_t users = 0;  // users with at least one test item

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

/// Metrics of a single ranked list against the user's (sorted) test items.
Metrics user_metrics(std::span<const ItemIndex> ranked, std::span<const ItemIndex> relevant, std::size_t n);

/// Averages precision@n, recall@n and NDCG@n over users with test items.
Metrics evaluate(const SplitPair& split, const Recommender& model, std::size_t n, bool reference_kernels = false);

enum class Metric { Precision, Recall, NDCG };
std::string_view metric_name(Metric metric);
Metric parse_metric(std::string_view name);
double metric_value(const Metrics& m, Metric metric);

struct AlgorithmResult {
  Algorithm algorithm;
  Metrics metrics;

  friend bool operator==(const AlgorithmResult&, const AlgorithmResult&) = default;
};

struct EvalReport {
  std::vector<AlgorithmResult> results;
  std::string fingerprint;
  DatasetStats dataset;
  std::uint64_t split_seed = 0;
  std::uint64_t fit_seed = 0;
  double test_fraction = 0.2;
  std::size_t n = 10;

  const AlgorithmResult& at(Algorithm algorithm) const;
  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

struct SuiteOptions {
  std::uint64_t split_seed = 0;
  std::uint64_t fit_seed = 0;
  double test_fraction = 0.2;
  std::size_t n = 10;
  Hyperparameters hyperparameters;
};

/// One split, every algorithm fitted on the same train view.
EvalReport run_suite(const InteractionSet& ds, std::span<const Algorithm> algorithms, const SuiteOptions& options);

struct OrderingComparison {
  double kendall_tau = 0.0;
  std::size_t concordant = 0;
  std::size_t discordant = 0;
  std::size_t tied = 0;
  std::vector<std::pair<Algorithm, Algorithm>> discordant_pairs;
};

/// Kendall tau-a between the algorithm rankings the two reports induce on
/// `metric`. Throws ArgumentError when the algorithm sets differ.
OrderingComparison compare_orderings(const EvalReport& a, const EvalReport& b, Metric metric);

nlohmann::json report_to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);
void write_report(std::ostream& out, const EvalReport& report);
EvalReport read_report(std::istream& in);

/// Aligned columns: Algorithm, Precision, Recall, NDCG.
void write_report_table(std::ostream& out, const EvalReport& report);

nlohmann::json comparison_to_json(const OrderingComparison& c, Metric metric);

}  // namespace synthratings
