#include "synthratings/experiment.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "synthratings/error.hpp"

namespace synthratings {
namespace {

using json = nlohmann::json;

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  return v.dump();
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig cfg;
  try {
    if (j.contains("dataset")) cfg.dataset = j.at("dataset").get<std::string>();
    if (j.contains("format")) cfg.format = parse_source_format(j.at("format").get<std::string>());
    if (j.contains("threshold")) cfg.threshold = j.at("threshold").get<double>();
    if (j.contains("clusters")) {
      const auto& c = j.at("clusters");
      cfg.clusters = c.is_array() ? c.get<std::vector<std::size_t>>() : std::vector<std::size_t>{c.get<std::size_t>()};
    }
    if (j.contains("users")) cfg.users = j.at("users").get<std::size_t>();
    if (j.contains("seeds")) {
      const auto& s = j.at("seeds");
      cfg.cluster_seed = s.value("cluster", cfg.cluster_seed);
      cfg.generate_seed = s.value("generate", cfg.generate_seed);
      cfg.split_seed = s.value("split", cfg.split_seed);
      cfg.fit_seed = s.value("fit", cfg.fit_seed);
    }
    if (j.contains("algorithms")) {
      cfg.algorithms.clear();
      for (const auto& a : j.at("algorithms")) cfg.algorithms.push_back(parse_algorithm(a.get<std::string>()));
    }
    if (j.contains("metrics")) {
      cfg.metrics.clear();
      for (const auto& m : j.at("metrics")) cfg.metrics.push_back(parse_metric(m.get<std::string>()));
    }
    cfg.n = j.value("n", cfg.n);
    cfg.test_fraction = j.value("test_fraction", cfg.test_fraction);
    if (j.contains("kmeans")) {
      cfg.max_iter = j.at("kmeans").value("max_iter", cfg.max_iter);
      cfg.tol = j.at("kmeans").value("tol", cfg.tol);
    }
    if (j.contains("rec")) {
      for (const auto& [algo, params] : j.at("rec").items()) {
        for (const auto& [param, value] : params.items()) {
          cfg.hyperparameters.set("rec." + algo + "." + param, scalar_text(value));
        }
      }
    }
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("invalid configuration: ") + e.what());
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open configuration '" + path.string() + "'");
  try {
    return from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ArgumentError(std::string("invalid configuration: ") + e.what());
  }
}

SuiteOptions ExperimentConfig::suite_options() const {
  SuiteOptions o;
  o.split_seed = split_seed;
  o.fit_seed = fit_seed;
  o.test_fraction = test_fraction;
  o.n = n;
  o.hyperparameters = hyperparameters;
  return o;
}

KMeansOptions ExperimentConfig::kmeans_options(std::size_t k) const {
  KMeansOptions o;
  o.k = k;
  o.seed = cluster_seed;
  o.max_iter = max_iter;
  o.tol = tol;
  return o;
}

LearnedModel learn_behavior(const InteractionSet& reference, const KMeansOptions& options) {
  LearnedModel out;
  out.clusters = kmeans(reference, options);
  out.behavior = learn(reference, out.clusters);
  return out;
}

ThreeWayResult run_three_way(const InteractionSet& reference, std::size_t k, const ExperimentConfig& cfg) {
  const auto learned = learn_behavior(reference, cfg.kmeans_options(k));
  GenerationConfig gen;
  gen.users = cfg.users.value_or(reference.user_count());
  gen.seed = cfg.generate_seed;
  const auto generated = generate(learned.behavior, gen).dataset;

  GenerationConfig base = gen;
  base.mode = GenerationMode::Baseline;
  base.target_ratings = reference.size();
  const auto baseline = generate(learned.behavior, base).dataset;

  const auto options = cfg.suite_options();
  ThreeWayResult r;
  r.reference_stats = stats(reference);
  r.generated_stats = stats(generated);
  r.baseline_stats = stats(baseline);
  r.reference = run_suite(reference, cfg.algorithms, options);
  r.generated = run_suite(generated, cfg.algorithms, options);
  r.baseline = run_suite(baseline, cfg.algorithms, options);
  return r;
}

std::vector<SweepRow> run_sweep(const InteractionSet& reference, const ExperimentConfig& cfg) {
  if (cfg.clusters.empty()) throw ArgumentError("sweep needs at least one K");
  std::vector<SweepRow> rows;
  for (const std::size_t k : cfg.clusters) {
    const auto learned = learn_behavior(reference, cfg.kmeans_options(k));
    GenerationConfig gen;
    gen.users = cfg.users.value_or(reference.user_count());
    gen.seed = cfg.generate_seed;
    const auto generated = generate(learned.behavior, gen).dataset;
    const auto report = run_suite(generated, cfg.algorithms, cfg.suite_options());
    for (const auto& r : report.results) {
      for (const auto m : cfg.metrics) rows.push_back({k, r.algorithm, m, metric_value(r.metrics, m)});
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "k,algorithm,metric,value\n";
  char value[64];
  for (const auto& row : rows) {
    std::snprintf(value, sizeof value, "%.17g", row.value);
    out << row.k << ',' << algorithm_key(row.algorithm) << ',' << metric_name(row.metric) << ',' << value << '\n';
  }
}

}  // namespace synthratings
