#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "synthratings/experiment.hpp"

namespace sr = synthratings;

// End-to-end on a planted-community surrogate: the three datasets have the
// expected shapes and every algorithm produces sane numbers on each.
TEST(Pipeline, PlantedSurrogateThreeWay) {
  const auto ref = sr::testing::planted_dataset(2024, 400, 250, 8, 25.0);
  sr::ExperimentConfig cfg;
  cfg.hyperparameters.bpr_epochs = 30;
  const auto r = sr::run_three_way(ref, 20, cfg);

  EXPECT_EQ(r.generated_stats.users, ref.user_count());
  EXPECT_LE(r.generated_stats.items, ref.item_count());
  EXPECT_NEAR(static_cast<double>(r.generated_stats.ratings), static_cast<double>(ref.size()), 0.1 * ref.size());
  EXPECT_EQ(r.baseline_stats.ratings, ref.size());

  for (const auto* report : {&r.reference, &r.generated, &r.baseline}) {
    for (const auto& res : report->results) {
      EXPECT_GE(res.metrics.precision, 0.0);
      EXPECT_LE(res.metrics.precision, 1.0);
      EXPECT_GT(res.metrics.users, 0u);
    }
    EXPECT_GT(report->at(sr::Algorithm::MostPopular).metrics.precision,
              report->at(sr::Algorithm::Random).metrics.precision);
  }
  // Community structure is what personalized models exploit on the reference.
  EXPECT_GT(r.reference.at(sr::Algorithm::UserKNN).metrics.precision,
            r.reference.at(sr::Algorithm::MostPopular).metrics.precision);
}
