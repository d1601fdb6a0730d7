// synthratings: learn community rating behavior from a reference dataset,
// generate synthetic datasets, and evaluate recommenders on them.
//
// Exit codes: 0 success, 2 usage, 3 input data, 4 internal invariant.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "synthratings/error.hpp"
#include "synthratings/experiment.hpp"
#include "synthratings/parallel.hpp"

namespace sr = synthratings;
using json = nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitInvariant = 4;

// Flags shared by the commands that read a dataset.
struct DatasetFlags {
  std::string input;
  std::string format;
  double threshold = 0.0;
  CLI::Option* threshold_opt = nullptr;

  void attach(CLI::App* cmd) {
    cmd->add_option("input", input, "Dataset file ('-' or omitted reads standard input)");
    cmd->add_option("--format", format, "ml100k | ml1m | lastfm | canonical");
    threshold_opt = cmd->add_option("--threshold", threshold, "Keep values strictly greater than this");
  }

  void apply(sr::ExperimentConfig& cfg) const {
    if (!input.empty()) cfg.dataset = input;
    if (!format.empty()) cfg.format = sr::parse_source_format(format);
    if (threshold_opt->count() > 0) cfg.threshold = threshold;
  }
};

sr::InteractionSet load_dataset(const sr::ExperimentConfig& cfg) {
  if (cfg.dataset.empty() || cfg.dataset == "-") return sr::parse(std::cin, cfg.format, cfg.threshold);
  return sr::parse_file(cfg.dataset, cfg.format, cfg.threshold);
}

template <typename Fn>
void write_file(const std::string& path, Fn&& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw sr::ArgumentError("cannot write '" + path + "'");
  body(out);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void apply_overrides(sr::ExperimentConfig& cfg, const std::vector<std::string>& overrides) {
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw sr::ArgumentError("--set expects key=value, got '" + kv + "'");
    cfg.hyperparameters.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
}

std::size_t parse_count(const std::string& text, const char* flag) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw sr::ArgumentError(std::string("invalid ") + flag + " entry '" + text + "'");
  }
  return value;
}

void print_stats(std::ostream& out, const sr::DatasetStats& s) {
  out << "users " << s.users << "\nitems " << s.items << "\nratings " << s.ratings << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  sr::apply_thread_limit_from_env();

  CLI::App app{"Synthetic rating dataset generation and offline recommender evaluation"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON experiment configuration; flags override it");

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "Print user, item and rating counts");
  DatasetFlags stats_data;
  stats_data.attach(stats_cmd);
  bool stats_json = false;
  stats_cmd->add_flag("--json", stats_json, "Emit JSON");

  // learn
  auto* learn_cmd = app.add_subcommand("learn", "Cluster users and learn the behavior model");
  DatasetFlags learn_data;
  learn_data.attach(learn_cmd);
  std::size_t learn_k = 0;
  std::uint64_t learn_seed = 0;
  std::size_t learn_max_iter = 0;
  double learn_tol = 0.0;
  std::string learn_out;
  auto* learn_k_opt = learn_cmd->add_option("--clusters,-k", learn_k, "Number of communities K");
  auto* learn_seed_opt = learn_cmd->add_option("--seed", learn_seed, "Clustering seed");
  auto* learn_iter_opt = learn_cmd->add_option("--max-iter", learn_max_iter, "Lloyd iteration cap");
  auto* learn_tol_opt = learn_cmd->add_option("--tol", learn_tol, "Centroid displacement tolerance");
  learn_cmd->add_option("-o,--out", learn_out, "Model file")->required();

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "Sample a synthetic dataset from a behavior model");
  std::string gen_model;
  std::size_t gen_users = 0;
  bool gen_baseline = false;
  std::uint64_t gen_target = 0;
  std::uint64_t gen_seed = 0;
  bool gen_streams = false;
  std::string gen_out;
  gen_cmd->add_option("--model", gen_model, "Behavior model file")->required();
  auto* gen_users_opt = gen_cmd->add_option("--users", gen_users, "Synthetic users U (default: reference count)");
  gen_cmd->add_flag("--baseline", gen_baseline, "Single-community generation with an exact rating total");
  auto* gen_target_opt =
      gen_cmd->add_option("--target-ratings", gen_target, "Baseline rating total (default: reference count)");
  auto* gen_seed_opt = gen_cmd->add_option("--seed", gen_seed, "Generation seed");
  gen_cmd->add_flag("--per-user-streams", gen_streams,
                    "One RNG stream per user (parallel; output differs from the default sequential stream)");
  gen_cmd->add_option("-o,--out", gen_out, "Output dataset (canonical format)");

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate recommenders with a random hold-out split");
  DatasetFlags eval_data;
  eval_data.attach(eval_cmd);
  std::string eval_algorithms;
  std::uint64_t eval_split_seed = 0;
  std::uint64_t eval_fit_seed = 0;
  std::size_t eval_n = 0;
  double eval_fraction = 0.0;
  std::vector<std::string> eval_set;
  std::string eval_out;
  auto* eval_algo_opt = eval_cmd->add_option("--algorithms", eval_algorithms, "Comma list (default: all five)");
  auto* eval_split_opt = eval_cmd->add_option("--split-seed", eval_split_seed, "Split seed");
  auto* eval_fit_opt = eval_cmd->add_option("--fit-seed", eval_fit_seed, "Model fitting seed");
  auto* eval_n_opt = eval_cmd->add_option("-n,--top", eval_n, "Recommendation list length");
  auto* eval_frac_opt = eval_cmd->add_option("--test-fraction", eval_fraction, "Share of ratings held out");
  eval_cmd->add_option("--set", eval_set, "Hyperparameter override rec.<algo>.<param>=value");
  eval_cmd->add_option("-o,--out", eval_out, "Report JSON");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Learn, generate and evaluate for several K");
  DatasetFlags sweep_data;
  sweep_data.attach(sweep_cmd);
  std::string sweep_ks;
  std::size_t sweep_users = 0;
  std::uint64_t sweep_cluster_seed = 0;
  std::uint64_t sweep_gen_seed = 0;
  std::uint64_t sweep_split_seed = 0;
  std::uint64_t sweep_fit_seed = 0;
  std::string sweep_algorithms;
  std::string sweep_metrics;
  std::vector<std::string> sweep_set;
  std::string sweep_out;
  auto* sweep_k_opt = sweep_cmd->add_option("--k-list", sweep_ks, "Comma list of K, e.g. 5,10,50,100,200");
  auto* sweep_users_opt = sweep_cmd->add_option("--users", sweep_users, "Synthetic users (default: reference)");
  auto* sweep_cseed_opt = sweep_cmd->add_option("--cluster-seed", sweep_cluster_seed, "Clustering seed");
  auto* sweep_gseed_opt = sweep_cmd->add_option("--generate-seed", sweep_gen_seed, "Generation seed");
  auto* sweep_sseed_opt = sweep_cmd->add_option("--split-seed", sweep_split_seed, "Split seed");
  auto* sweep_fseed_opt = sweep_cmd->add_option("--fit-seed", sweep_fit_seed, "Model fitting seed");
  auto* sweep_algo_opt = sweep_cmd->add_option("--algorithms", sweep_algorithms, "Comma list");
  auto* sweep_metric_opt = sweep_cmd->add_option("--metrics", sweep_metrics, "Comma list");
  sweep_cmd->add_option("--set", sweep_set, "Hyperparameter override rec.<algo>.<param>=value");
  sweep_cmd->add_option("-o,--out", sweep_out, "CSV output");

  // compare
  auto* cmp_cmd = app.add_subcommand("compare", "Kendall tau between the algorithm orderings of two reports");
  std::string cmp_a;
  std::string cmp_b;
  std::string cmp_metrics = "precision,recall,ndcg";
  std::string cmp_out;
  cmp_cmd->add_option("first", cmp_a, "Report JSON")->required();
  cmp_cmd->add_option("second", cmp_b, "Report JSON")->required();
  cmp_cmd->add_option("--metrics", cmp_metrics, "Comma list");
  cmp_cmd->add_option("-o,--out", cmp_out, "Comparison JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    sr::ExperimentConfig cfg = config_path.empty() ? sr::ExperimentConfig{} : sr::ExperimentConfig::load(config_path);

    if (*stats_cmd) {
      stats_data.apply(cfg);
      const auto s = sr::stats(load_dataset(cfg));
      if (stats_json) {
        std::cout << json{{"users", s.users}, {"items", s.items}, {"ratings", s.ratings}}.dump() << '\n';
      } else {
        print_stats(std::cout, s);
      }
    } else if (*learn_cmd) {
      learn_data.apply(cfg);
      if (learn_k_opt->count() > 0) cfg.clusters = {learn_k};
      if (learn_seed_opt->count() > 0) cfg.cluster_seed = learn_seed;
      if (learn_iter_opt->count() > 0) cfg.max_iter = learn_max_iter;
      if (learn_tol_opt->count() > 0) cfg.tol = learn_tol;
      if (cfg.clusters.size() != 1) throw sr::ArgumentError("learn takes a single --clusters value");
      const auto ds = load_dataset(cfg);
      const auto learned = sr::learn_behavior(ds, cfg.kmeans_options(cfg.clusters.front()));
      write_file(learn_out, [&](std::ostream& out) { sr::write_behavior_model(out, learned.behavior); });
      const auto sizes = learned.clusters.cluster_sizes();
      std::cout << "clusters " << learned.clusters.k << "\ninertia " << learned.clusters.inertia << "\niterations "
                << learned.clusters.iterations << (learned.clusters.converged ? " (converged)" : "") << "\nsizes";
      for (const auto s : sizes) std::cout << ' ' << s;
      std::cout << '\n';
    } else if (*gen_cmd) {
      std::ifstream in(gen_model);
      if (!in) throw sr::ArgumentError("cannot open model '" + gen_model + "'");
      const auto model = sr::read_behavior_model(in);
      sr::GenerationConfig gen;
      gen.users = gen_users_opt->count() > 0 ? gen_users : cfg.users.value_or(model.reference_users);
      gen.seed = gen_seed_opt->count() > 0 ? gen_seed : cfg.generate_seed;
      gen.per_user_streams = gen_streams;
      if (gen_baseline) {
        gen.mode = sr::GenerationMode::Baseline;
        gen.target_ratings = gen_target_opt->count() > 0 ? gen_target : model.reference_ratings;
      }
      const auto result = sr::generate(model, gen);
      write_file(gen_out, [&](std::ostream& out) { sr::write_canonical(out, result.dataset); });
      if (result.clamped_draws > 0) {
        std::cerr << "warning: " << result.clamped_draws << " users had their rating count clamped\n";
      }
      print_stats(gen_out.empty() || gen_out == "-" ? std::cerr : std::cout, sr::stats(result.dataset));
    } else if (*eval_cmd) {
      eval_data.apply(cfg);
      if (eval_algo_opt->count() > 0) {
        cfg.algorithms.clear();
        for (const auto& a : split_list(eval_algorithms)) cfg.algorithms.push_back(sr::parse_algorithm(a));
      }
      if (eval_split_opt->count() > 0) cfg.split_seed = eval_split_seed;
      if (eval_fit_opt->count() > 0) cfg.fit_seed = eval_fit_seed;
      if (eval_n_opt->count() > 0) cfg.n = eval_n;
      if (eval_frac_opt->count() > 0) cfg.test_fraction = eval_fraction;
      apply_overrides(cfg, eval_set);
      const auto report = sr::run_suite(load_dataset(cfg), cfg.algorithms, cfg.suite_options());
      if (!eval_out.empty()) write_file(eval_out, [&](std::ostream& out) { sr::write_report(out, report); });
      sr::write_report_table(std::cout, report);
    } else if (*sweep_cmd) {
      sweep_data.apply(cfg);
      if (sweep_k_opt->count() > 0) {
        cfg.clusters.clear();
        for (const auto& k : split_list(sweep_ks)) cfg.clusters.push_back(parse_count(k, "--k-list"));
      }
      if (sweep_users_opt->count() > 0) cfg.users = sweep_users;
      if (sweep_cseed_opt->count() > 0) cfg.cluster_seed = sweep_cluster_seed;
      if (sweep_gseed_opt->count() > 0) cfg.generate_seed = sweep_gen_seed;
      if (sweep_sseed_opt->count() > 0) cfg.split_seed = sweep_split_seed;
      if (sweep_fseed_opt->count() > 0) cfg.fit_seed = sweep_fit_seed;
      if (sweep_algo_opt->count() > 0) {
        cfg.algorithms.clear();
        for (const auto& a : split_list(sweep_algorithms)) cfg.algorithms.push_back(sr::parse_algorithm(a));
      }
      if (sweep_metric_opt->count() > 0) {
        cfg.metrics.clear();
        for (const auto& m : split_list(sweep_metrics)) cfg.metrics.push_back(sr::parse_metric(m));
      }
      apply_overrides(cfg, sweep_set);
      const auto rows = sr::run_sweep(load_dataset(cfg), cfg);
      write_file(sweep_out, [&](std::ostream& out) { sr::write_sweep_csv(out, rows); });
      if (!sweep_out.empty() && sweep_out != "-") {
        for (const auto& r : rows) {
          std::printf("K=%-5zu %-14s %-10s %.6f\n", r.k, std::string(sr::algorithm_label(r.algorithm)).c_str(),
                      std::string(sr::metric_name(r.metric)).c_str(), r.value);
        }
      }
    } else if (*cmp_cmd) {
      const auto load = [](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw sr::ArgumentError("cannot open report '" + path + "'");
        return sr::read_report(in);
      };
      const auto a = load(cmp_a);
      const auto b = load(cmp_b);
      json out = json::array();
      for (const auto& name : split_list(cmp_metrics)) {
        const auto metric = sr::parse_metric(name);
        const auto c = sr::compare_orderings(a, b, metric);
        out.push_back(sr::comparison_to_json(c, metric));
        std::printf("%-10s tau %+.4f  concordant %zu  discordant %zu  tied %zu\n",
                    std::string(sr::metric_name(metric)).c_str(), c.kendall_tau, c.concordant, c.discordant, c.tied);
        for (const auto& [x, y] : c.discordant_pairs) {
          std::printf("  discordant: %s vs %s\n", std::string(sr::algorithm_label(x)).c_str(),
                      std::string(sr::algorithm_label(y)).c_str());
        }
      }
      if (!cmp_out.empty()) write_file(cmp_out, [&](std::ostream& o) { o << out.dump(1) << '\n'; });
    }
  } catch (const sr::ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const sr::ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitData;
  } catch (const sr::InvariantError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInvariant;
  }
  return 0;
}
