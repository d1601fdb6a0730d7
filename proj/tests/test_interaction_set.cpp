#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "synthratings/error.hpp"
#include "synthratings/ingest.hpp"
#include "synthratings/interaction_set.hpp"

namespace sr = synthratings;
using sr::testing::Pairs;

TEST(InteractionSet, EmptyInput) {
  const auto ds = sr::InteractionSet::build(Pairs{});
  EXPECT_EQ(ds.user_count(), 0u);
  EXPECT_EQ(ds.item_count(), 0u);
  EXPECT_EQ(ds.size(), 0u);
  EXPECT_EQ(sr::stats(ds), (sr::DatasetStats{0, 0, 0}));
}

TEST(InteractionSet, DuplicatesCollapse) {
  const auto ds = sr::InteractionSet::build(Pairs{{"u1", "i1"}, {"u1", "i1"}, {"u1", "i2"}});
  EXPECT_EQ(ds.user_count(), 1u);
  EXPECT_EQ(ds.item_count(), 2u);
  EXPECT_EQ(ds.size(), 2u);
}

TEST(InteractionSet, FirstSeenOrder) {
  const auto ds = sr::InteractionSet::build(Pairs{{"b", "y"}, {"a", "x"}, {"b", "x"}});
  EXPECT_EQ(ds.user_id(0), "b");
  EXPECT_EQ(ds.user_id(1), "a");
  EXPECT_EQ(ds.item_id(0), "y");
  EXPECT_EQ(ds.item_id(1), "x");
  EXPECT_EQ(*ds.find_user("a"), 1u);
  EXPECT_FALSE(ds.find_item("z").has_value());
}

TEST(InteractionSet, ToyFixtureStats) {
  EXPECT_EQ(sr::stats(sr::testing::toy_fixture()), (sr::DatasetStats{4, 3, 8}));
}

TEST(InteractionSet, UserVector) {
  const auto ds = sr::InteractionSet::build(Pairs{{"a", "i0"}, {"b", "i1"}, {"a", "i2"}, {"c", "i0"}, {"c", "i1"},
                                                  {"c", "i2"}});
  EXPECT_EQ(ds.user_vector(0).dense(), (std::vector<std::uint8_t>{1, 0, 1}));
  EXPECT_EQ(ds.user_vector(2).dense(), (std::vector<std::uint8_t>{1, 1, 1}));
  EXPECT_EQ(sr::testing::toy_fixture().user_vector(2).dense(), (std::vector<std::uint8_t>{0, 1, 1}));
  EXPECT_THROW(ds.user_vector(3), sr::ArgumentError);
}

TEST(InteractionSet, StatsCountOnlyOccurringItems) {
  auto matrix = sr::UserItemMatrix::from_rows(4, {{0, 2}, {2}});
  const auto ds = sr::InteractionSet::from_parts({"a", "b"}, {"w", "x", "y", "z"}, std::move(matrix));
  EXPECT_EQ(ds.item_count(), 4u);
  EXPECT_EQ(sr::stats(ds), (sr::DatasetStats{2, 2, 3}));
}

TEST(InteractionSet, RejectsEmptyUsers) {
  auto matrix = sr::UserItemMatrix::from_rows(2, {{0}, {}});
  EXPECT_THROW(sr::InteractionSet::from_parts({"a", "b"}, {"x", "y"}, std::move(matrix)), sr::ArgumentError);
  EXPECT_THROW(sr::UserItemMatrix::from_rows(2, {{5}}), sr::ArgumentError);
}

TEST(UserItemMatrix, TransposeIsInvolution) {
  sr::Rng rng(3);
  const auto pairs = sr::testing::random_pairs(rng, 30, 20, 6);
  const auto ds = sr::InteractionSet::build(pairs);
  const auto t = ds.matrix().transpose();
  EXPECT_EQ(t.user_count(), ds.item_count());
  EXPECT_EQ(t.transpose(), ds.matrix());
  const auto degrees = ds.matrix().item_degrees();
  for (sr::ItemIndex i = 0; i < t.user_count(); ++i) EXPECT_EQ(t.row_size(i), degrees[i]);
}

// Writing the canonical format and reading it back preserves stats and the
// set of external pairs; from the second serialization on it is a fixed point.
TEST(InteractionSet, CanonicalRoundTripProperty) {
  sr::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto pairs = sr::testing::random_pairs(rng, 1 + rng.below(25), 1 + rng.below(15), 5);
    const auto ds = sr::InteractionSet::build(pairs);
    std::stringstream buffer;
    sr::write_canonical(buffer, ds);
    const auto back = sr::parse(buffer, sr::SourceFormat::Canonical);
    EXPECT_EQ(sr::stats(back), sr::stats(ds));
    const auto a = ds.external_pairs();
    const auto b = back.external_pairs();
    EXPECT_EQ(std::set(a.begin(), a.end()), std::set(b.begin(), b.end()));
    std::stringstream second;
    sr::write_canonical(second, back);
    const auto text = second.str();
    std::stringstream third;
    sr::write_canonical(third, sr::parse(second, sr::SourceFormat::Canonical));
    EXPECT_EQ(third.str(), text);
    std::size_t sum = 0;
    for (sr::UserIndex u = 0; u < ds.user_count(); ++u) sum += ds.items_of(u).size();
    EXPECT_EQ(sr::stats(ds).ratings, sum);
  }
}
