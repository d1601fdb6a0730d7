#include "synthratings/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>

#include <nlohmann/json.hpp>

#include "synthratings/error.hpp"
#include "synthratings/random.hpp"

namespace synthratings {
namespace {

using json = nlohmann::json;

constexpr const char* kReportFormat = "eval-report/1";

int sign(double x) { return (x > 0) - (x < 0); }

}  // namespace

SplitPair random_split(const InteractionSet& ds, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ArgumentError("test fraction must lie in (0, 1), got " + std::to_string(fraction));
  }
  const std::size_t total = ds.size();
  const auto test_size = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(total)));
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  // Partial Fisher-Yates: the first test_size positions are a uniform sample.
  for (std::size_t i = 0; i < test_size; ++i) {
    const std::size_t j = i + rng.below(total - i);
    std::swap(order[i], order[j]);
  }
  std::vector<std::uint8_t> in_test(total, 0);
  for (std::size_t i = 0; i < test_size; ++i) in_test[order[i]] = 1;

  std::vector<std::vector<ItemIndex>> train(ds.user_count());
  std::vector<std::vector<ItemIndex>> test(ds.user_count());
  std::size_t pos = 0;
  for (UserIndex u = 0; u < ds.user_count(); ++u) {
    for (const ItemIndex i : ds.items_of(u)) (in_test[pos++] ? test : train)[u].push_back(i);
  }
  SplitPair split;
  split.train = UserItemMatrix::from_rows(ds.item_count(), std::move(train));
  split.test = UserItemMatrix::from_rows(ds.item_count(), std::move(test));
  split.seed = seed;
  split.test_fraction = fraction;
  return split;
}

Metrics user_metrics(std::span<const ItemIndex> ranked, std::span<const ItemIndex> relevant, std::size_t n) {
  Metrics m;
  if (relevant.empty() || n == 0) return m;
  std::size_t hits = 0;
  double dcg = 0.0;
  const std::size_t depth = std::min(n, ranked.size());
  for (std::size_t r = 0; r < depth; ++r) {
    if (std::binary_search(relevant.begin(), relevant.end(), ranked[r])) {
      ++hits;
      dcg += 1.0 / std::log2(static_cast<double>(r) + 2.0);
    }
  }
  double ideal = 0.0;
  for (std::size_t r = 0; r < std::min(n, relevant.size()); ++r) ideal += 1.0 / std::log2(static_cast<double>(r) + 2.0);
  m.precision = static_cast<double>(hits) / static_cast<double>(n);
  m.recall = static_cast<double>(hits) / static_cast<double>(relevant.size());
  m.ndcg = dcg / ideal;
  m.users = 1;
  return m;
}

Metrics evaluate(const SplitPair& split, const Recommender& model, std::size_t n, bool reference_kernels) {
  const std::size_t users = split.test.user_count();
  std::vector<Metrics> per_user(users);
  const auto one = [&](UserIndex u) {
    const auto relevant = split.test.row(u);
    if (relevant.empty()) return;
    per_user[u] = user_metrics(model.recommend(u, n), relevant, n);
  };
  if (reference_kernels) {
    for (UserIndex u = 0; u < users; ++u) one(u);
  } else {
    const auto count = static_cast<std::int64_t>(users);
#pragma omp parallel for schedule(dynamic, 32)
    for (std::int64_t u = 0; u < count; ++u) one(static_cast<UserIndex>(u));
  }
  Metrics total;
  for (const auto& m : per_user) {
    total.precision += m.precision;
    total.recall += m.recall;
    total.ndcg += m.ndcg;
    total.users += m.users;
  }
  if (total.users > 0) {
    const auto denom = static_cast<double>(total.users);
    total.precision /= denom;
    total.recall /= denom;
    total.ndcg /= denom;
  }
  return total;
}

std::string_view metric_name(Metric metric) {
  switch (metric) {
    case Metric::Precision: return "precision";
    case Metric::Recall: return "recall";
    case Metric::NDCG: return "ndcg";
  }
  return "?";
}

Metric parse_metric(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
  if (key == "precision") return Metric::Precision;
  if (key == "recall") return Metric::Recall;
  if (key == "ndcg") return Metric::NDCG;
  throw ArgumentError("unknown metric '" + std::string(name) + "' (expected precision, recall or ndcg)");
}

double metric_value(const Metrics& m, Metric metric) {
  switch (metric) {
    case Metric::Precision: return m.precision;
    case Metric::Recall: return m.recall;
    case Metric::NDCG: return m.ndcg;
  }
  return 0.0;
}

const AlgorithmResult& EvalReport::at(Algorithm algorithm) const {
  for (const auto& r : results) {
    if (r.algorithm == algorithm) return r;
  }
  throw ArgumentError("report has no result for " + std::string(algorithm_label(algorithm)));
}

EvalReport run_suite(const InteractionSet& ds, std::span<const Algorithm> algorithms, const SuiteOptions& options) {
  if (ds.empty()) throw ArgumentError("cannot evaluate on an empty dataset");
  if (algorithms.empty()) throw ArgumentError("no algorithms requested");
  const SplitPair split = random_split(ds, options.test_fraction, options.split_seed);
  EvalReport report;
  report.fingerprint = to_hex(fingerprint(ds));
  report.dataset = stats(ds);
  report.split_seed = options.split_seed;
  report.fit_seed = options.fit_seed;
  report.test_fraction = options.test_fraction;
  report.n = options.n;
  for (const auto algorithm : algorithms) {
    const auto model = fit(algorithm, split.train, options.hyperparameters, options.fit_seed);
    report.results.push_back({algorithm, evaluate(split, *model, options.n)});
  }
  return report;
}

OrderingComparison compare_orderings(const EvalReport& a, const EvalReport& b, Metric metric) {
  if (a.results.size() != b.results.size()) throw ArgumentError("reports cover different algorithm sets");
  std::vector<std::pair<double, double>> values;
  for (const auto& r : a.results) {
    const auto match = std::find_if(b.results.begin(), b.results.end(),
                                    [&](const AlgorithmResult& x) { return x.algorithm == r.algorithm; });
    if (match == b.results.end()) throw ArgumentError("reports cover different algorithm sets");
    values.emplace_back(metric_value(r.metrics, metric), metric_value(match->metrics, metric));
  }
  OrderingComparison out;
  const std::size_t n = values.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const int s = sign(values[i].first - values[j].first) * sign(values[i].second - values[j].second);
      if (s > 0) {
        ++out.concordant;
      } else if (s < 0) {
        ++out.discordant;
        out.discordant_pairs.emplace_back(a.results[i].algorithm, a.results[j].algorithm);
      } else {
        ++out.tied;
      }
    }
  }
  const std::size_t pairs = n * (n - 1) / 2;
  out.kendall_tau = pairs == 0 ? 1.0
                               : (static_cast<double>(out.concordant) - static_cast<double>(out.discordant)) /
                                     static_cast<double>(pairs);
  return out;
}

json report_to_json(const EvalReport& report) {
  json results = json::array();
  for (const auto& r : report.results) {
    results.push_back({{"algorithm", algorithm_label(r.algorithm)},
                       {"key", algorithm_key(r.algorithm)},
                       {"precision", r.metrics.precision},
                       {"recall", r.metrics.recall},
                       {"ndcg", r.metrics.ndcg},
                       {"users", r.metrics.users}});
  }
  return {{"format", kReportFormat},
          {"fingerprint", report.fingerprint},
          {"dataset", {{"users", report.dataset.users}, {"items", report.dataset.items}, {"ratings", report.dataset.ratings}}},
          {"split_seed", report.split_seed},
          {"fit_seed", report.fit_seed},
          {"test_fraction", report.test_fraction},
          {"n", report.n},
          {"results", results}};
}

EvalReport report_from_json(const json& j) {
  EvalReport report;
  try {
    if (j.at("format").get<std::string>() != kReportFormat) throw ParseError("unsupported report format", 0);
    report.fingerprint = j.at("fingerprint").get<std::string>();
    report.dataset.users = j.at("dataset").at("users").get<std::size_t>();
    report.dataset.items = j.at("dataset").at("items").get<std::size_t>();
    report.dataset.ratings = j.at("dataset").at("ratings").get<std::size_t>();
    report.split_seed = j.at("split_seed").get<std::uint64_t>();
    report.fit_seed = j.at("fit_seed").get<std::uint64_t>();
    report.test_fraction = j.at("test_fraction").get<double>();
    report.n = j.at("n").get<std::size_t>();
    for (const auto& r : j.at("results")) {
      AlgorithmResult result{parse_algorithm(r.at("key").get<std::string>()), {}};
      result.metrics.precision = r.at("precision").get<double>();
      result.metrics.recall = r.at("recall").get<double>();
      result.metrics.ndcg = r.at("ndcg").get<double>();
      result.metrics.users = r.at("users").get<std::size_t>();
      report.results.push_back(result);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what(), 0);
  }
  return report;
}

void write_report(std::ostream& out, const EvalReport& report) { out << report_to_json(report).dump(1) << '\n'; }

EvalReport read_report(std::istream& in) {
  try {
    return report_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what(), 0);
  }
}

void write_report_table(std::ostream& out, const EvalReport& report) {
  char line[128];
  std::snprintf(line, sizeof line, "%-14s %10s %10s %10s\n", "Algorithm", "Precision", "Recall", "NDCG");
  out << line;
  for (const auto& r : report.results) {
    std::snprintf(line, sizeof line, "%-14s %10.6f %10.6f %10.6f\n", std::string(algorithm_label(r.algorithm)).c_str(),
                  r.metrics.precision, r.metrics.recall, r.metrics.ndcg);
    out << line;
  }
}

json comparison_to_json(const OrderingComparison& c, Metric metric) {
  json pairs = json::array();
  for (const auto& [x, y] : c.discordant_pairs) pairs.push_back({algorithm_label(x), algorithm_label(y)});
  return {{"metric", metric_name(metric)},
          {"kendall_tau", c.kendall_tau},
          {"concordant_pairs", c.concordant},
          {"discordant_pairs", c.discordant},
          {"tied_pairs", c.tied},
          {"discordant", pairs}};
}

}  // namespace synthratings
