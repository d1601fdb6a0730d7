#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "synthratings/error.hpp"
#include "synthratings/evaluation.hpp"

namespace sr = synthratings;
using Items = std::vector<sr::ItemIndex>;

namespace {

sr::EvalReport report_with(std::vector<std::pair<sr::Algorithm, double>> precision) {
  sr::EvalReport r;
  for (const auto& [a, p] : precision) r.results.push_back({a, {p, p / 2, p / 3, 10}});
  return r;
}

}  // namespace

TEST(Split, SizeDisjointAndCovering) {
  const auto ds = sr::testing::planted_dataset(1, 200, 60, 3, 6.0);
  const auto split = sr::random_split(ds, 0.2, 5);
  EXPECT_EQ(split.test.nnz(), static_cast<std::size_t>(std::llround(0.2 * ds.size())));
  EXPECT_EQ(split.train.nnz() + split.test.nnz(), ds.size());
  for (sr::UserIndex u = 0; u < ds.user_count(); ++u) {
    for (const auto i : split.test.row(u)) {
      EXPECT_FALSE(split.train.contains(u, i));
      EXPECT_TRUE(ds.matrix().contains(u, i));
    }
  }
}

TEST(Split, DeterministicPerSeed) {
  const auto ds = sr::testing::planted_dataset(2, 100, 40, 3, 6.0);
  EXPECT_EQ(sr::random_split(ds, 0.2, 3).test, sr::random_split(ds, 0.2, 3).test);
  EXPECT_NE(sr::random_split(ds, 0.2, 3).test, sr::random_split(ds, 0.2, 4).test);
}

TEST(Split, RejectsBadFraction) {
  const auto ds = sr::testing::toy_fixture();
  for (const double f : {0.0, 1.0, -0.1, 1.5, std::nan("")}) EXPECT_THROW(sr::random_split(ds, f, 0), sr::ArgumentError);
}

// Each interaction lands in test with probability close to the fraction.
TEST(Split, UniformInclusion) {
  const auto ds = sr::testing::toy_fixture();
  std::vector<std::uint64_t> hits(ds.size(), 0);
  constexpr int kTrials = 4000;
  for (int t = 0; t < kTrials; ++t) {
    const auto split = sr::random_split(ds, 0.25, static_cast<std::uint64_t>(t));
    std::size_t pos = 0;
    for (sr::UserIndex u = 0; u < ds.user_count(); ++u) {
      for (const auto i : ds.items_of(u)) hits[pos++] += split.test.contains(u, i);
    }
  }
  // 2 of 8 interactions per split, so inclusion probability 1/4.
  for (const auto h : hits) EXPECT_NEAR(static_cast<double>(h) / kTrials, 0.25, 3 * std::sqrt(0.25 * 0.75 / kTrials));
}

TEST(Metrics, WorkedExample) {
  // Two relevant items, a single hit at rank 3 of 10.
  const auto m = sr::user_metrics(Items{5, 9, 7, 1, 2, 3, 4, 6, 8, 10}, Items{7, 11}, 10);
  EXPECT_DOUBLE_EQ(m.precision, 0.1);
  EXPECT_DOUBLE_EQ(m.recall, 0.5);
  EXPECT_NEAR(m.ndcg, 0.3066, 1e-4);
  EXPECT_DOUBLE_EQ(m.ndcg, 0.5 / (1 + 1 / std::log2(3.0)));
}

TEST(Metrics, PerfectAndEmpty) {
  const auto perfect = sr::user_metrics(Items{1, 2}, Items{1, 2}, 2);
  EXPECT_DOUBLE_EQ(perfect.precision, 1.0);
  EXPECT_DOUBLE_EQ(perfect.recall, 1.0);
  EXPECT_DOUBLE_EQ(perfect.ndcg, 1.0);
  const auto miss = sr::user_metrics(Items{3, 4}, Items{1, 2}, 2);
  EXPECT_EQ(miss.precision + miss.recall + miss.ndcg, 0.0);
  // Short lists still divide precision by n.
  EXPECT_DOUBLE_EQ(sr::user_metrics(Items{1}, Items{1}, 10).precision, 0.1);
  EXPECT_EQ(sr::user_metrics(Items{1}, Items{}, 10).users, 0u);
}

// Metrics stay in [0, 1] and recall * |relevant| = precision * n = hits.
TEST(Metrics, BoundsProperty) {
  sr::Rng rng(13);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + rng.below(10);
    Items ranked;
    for (std::size_t r = 0; r < rng.below(n + 1); ++r) {
      const auto i = static_cast<sr::ItemIndex>(rng.below(30));
      if (std::find(ranked.begin(), ranked.end(), i) == ranked.end()) ranked.push_back(i);
    }
    Items relevant;
    for (std::size_t r = 0; r < 1 + rng.below(8); ++r) relevant.push_back(static_cast<sr::ItemIndex>(rng.below(30)));
    std::sort(relevant.begin(), relevant.end());
    relevant.erase(std::unique(relevant.begin(), relevant.end()), relevant.end());
    const auto m = sr::user_metrics(ranked, relevant, n);
    for (const double v : {m.precision, m.recall, m.ndcg}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0 + 1e-12);
    }
    EXPECT_NEAR(m.recall * relevant.size(), m.precision * n, 1e-9);
  }
}

TEST(Evaluate, AveragesOverUsersWithTestItems) {
  sr::SplitPair split;
  split.train = sr::UserItemMatrix::from_rows(4, {{0}, {0, 1}, {2}});
  split.test = sr::UserItemMatrix::from_rows(4, {{1}, {}, {3}});
  const sr::MostPopularRecommender mp(split.train);
  // Popularity: i0=2, i1=1, i2=1. u0 gets [1, 2], u2 gets [0, 1].
  const auto m = sr::evaluate(split, mp, 2);
  EXPECT_EQ(m.users, 2u);
  EXPECT_DOUBLE_EQ(m.precision, (0.5 + 0.0) / 2);
  EXPECT_DOUBLE_EQ(m.recall, (1.0 + 0.0) / 2);
  EXPECT_DOUBLE_EQ(m.ndcg, 0.5);
  EXPECT_EQ(sr::evaluate(split, mp, 2, true), m);
}

TEST(Kendall, Cases) {
  using A = sr::Algorithm;
  const auto a = report_with({{A::Random, 0.1}, {A::MostPopular, 0.2}, {A::UserKNN, 0.3}, {A::WRMF, 0.4}});
  const auto same = report_with({{A::WRMF, 0.9}, {A::UserKNN, 0.5}, {A::MostPopular, 0.3}, {A::Random, 0.0}});
  const auto reversed = report_with({{A::Random, 0.4}, {A::MostPopular, 0.3}, {A::UserKNN, 0.2}, {A::WRMF, 0.1}});
  const auto one_swap = report_with({{A::Random, 0.2}, {A::MostPopular, 0.1}, {A::UserKNN, 0.3}, {A::WRMF, 0.4}});
  const auto p = sr::Metric::Precision;

  EXPECT_DOUBLE_EQ(sr::compare_orderings(a, same, p).kendall_tau, 1.0);
  EXPECT_DOUBLE_EQ(sr::compare_orderings(a, reversed, p).kendall_tau, -1.0);
  const auto c = sr::compare_orderings(a, one_swap, p);
  EXPECT_DOUBLE_EQ(c.kendall_tau, (5.0 - 1.0) / 6.0);
  ASSERT_EQ(c.discordant_pairs.size(), 1u);
  EXPECT_EQ(c.discordant_pairs[0], std::make_pair(A::Random, A::MostPopular));

  // Symmetric in its arguments; reversing one side negates it.
  EXPECT_DOUBLE_EQ(sr::compare_orderings(one_swap, a, p).kendall_tau, c.kendall_tau);
  EXPECT_DOUBLE_EQ(sr::compare_orderings(reversed, one_swap, p).kendall_tau, -c.kendall_tau);

  const auto tied = report_with({{A::Random, 0.1}, {A::MostPopular, 0.1}, {A::UserKNN, 0.3}, {A::WRMF, 0.4}});
  const auto t = sr::compare_orderings(a, tied, p);
  EXPECT_EQ(t.tied, 1u);
  EXPECT_DOUBLE_EQ(t.kendall_tau, 5.0 / 6.0);
}

TEST(Kendall, RejectsMismatchedSets) {
  using A = sr::Algorithm;
  const auto a = report_with({{A::Random, 0.1}, {A::MostPopular, 0.2}});
  const auto b = report_with({{A::Random, 0.1}, {A::WRMF, 0.2}});
  const auto c = report_with({{A::Random, 0.1}});
  EXPECT_THROW(sr::compare_orderings(a, b, sr::Metric::Precision), sr::ArgumentError);
  EXPECT_THROW(sr::compare_orderings(a, c, sr::Metric::Precision), sr::ArgumentError);
}

TEST(Report, JsonRoundTrip) {
  const auto ds = sr::testing::planted_dataset(3, 80, 30, 2, 5.0);
  sr::SuiteOptions opts;
  opts.hyperparameters.bpr_epochs = 5;
  opts.hyperparameters.wrmf_iterations = 3;
  const auto algorithms = sr::all_algorithms();
  const auto report = sr::run_suite(ds, algorithms, opts);
  ASSERT_EQ(report.results.size(), algorithms.size());
  EXPECT_EQ(report.dataset, sr::stats(ds));
  std::stringstream buffer;
  sr::write_report(buffer, report);
  const auto text = buffer.str();
  EXPECT_EQ(sr::read_report(buffer), report);
  std::stringstream again;
  sr::write_report(again, report);
  EXPECT_EQ(again.str(), text);
  EXPECT_EQ(sr::run_suite(ds, algorithms, opts), report);

  std::istringstream bad("{\"format\":\"eval-report/1\"}");
  EXPECT_THROW(sr::read_report(bad), sr::ParseError);
}

TEST(Report, MetricNames) {
  for (const auto m : {sr::Metric::Precision, sr::Metric::Recall, sr::Metric::NDCG}) {
    EXPECT_EQ(sr::parse_metric(sr::metric_name(m)), m);
  }
  EXPECT_EQ(sr::parse_metric("NDCG"), sr::Metric::NDCG);
  EXPECT_THROW(sr::parse_metric("map"), sr::ArgumentError);
}
