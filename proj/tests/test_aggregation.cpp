#include <gtest/gtest.h>

#include <random>

#include "teamfit/aggregation.hpp"
#include "test_support.hpp"

namespace teamfit {
namespace {

using testing::math_french_spec;
using testing::random_capacity;
using testing::random_unit_vector;
using testing::unit_spec;

Capacity2Additive capacity(double m_math, double m_french, double m_pair) {
  Capacity2Additive c;
  c.singletons = {{"math", m_math}, {"french", m_french}};
  if (m_pair != 0.0) c.pairs[CriterionPair::of("math", "french")] = m_pair;
  return c;
}

const std::vector<std::vector<double>> kTrio{{1.0, 0.5}, {0.5, 1.0}, {0.75, 0.75}};

TEST(ValidateCapacity, ComplementaryCapacityIsOk) {
  EXPECT_TRUE(validate_capacity(capacity(0.3, 0.3, 0.4), math_french_spec()).ok());
}

TEST(ValidateCapacity, AdditiveCapacityIsOk) {
  EXPECT_TRUE(validate_capacity(capacity(0.5, 0.5, 0.0), math_french_spec()).ok());
}

TEST(ValidateCapacity, NegativeSingletonBreaksMonotonicity) {
  // -0.05 + 0.75 + 0.3 = 1; math: -0.05 + min(0, 0.3) = -0.05 < 0
  auto report = validate_capacity(capacity(-0.05, 0.75, 0.3), math_french_spec());
  ASSERT_EQ(report.violations().size(), 1u);
  EXPECT_EQ(report.violations()[0].rule, "monotonicity");
  EXPECT_EQ(report.violations()[0].subject, "math");
  EXPECT_NE(report.violations()[0].message.find("criterion math"), std::string::npos);
}

TEST(ValidateCapacity, ListsEveryViolatedRule) {
  // 0.1 + 0.5 - 0.2 = 0.4; math: 0.1 - 0.2 < 0; french: 0.5 - 0.2 >= 0
  auto report = validate_capacity(capacity(0.1, 0.5, -0.2), math_french_spec());
  EXPECT_TRUE(report.has_rule("normalization"));
  EXPECT_TRUE(report.has_rule("monotonicity"));
  EXPECT_EQ(report.violations().size(), 2u);
}

TEST(ValidateCapacity, UnknownCriterionThrows) {
  Capacity2Additive c = capacity(0.5, 0.5, 0.0);
  c.singletons["physics"] = 0.0;
  EXPECT_THROW(validate_capacity(c, math_french_spec()), Error);
}

TEST(WeightedMean, TrioTies) {
  WeightVector w{{0.5, 0.5}};
  for (const auto& x : kTrio) EXPECT_EQ(weighted_mean(x, w), 0.75);
}

TEST(WeightedMean, ConstantProfileAndDegenerateWeights) {
  EXPECT_DOUBLE_EQ(weighted_mean(std::vector<double>{0.4, 0.4, 0.4}, WeightVector{{0.2, 0.3, 0.5}}), 0.4);
  EXPECT_DOUBLE_EQ(weighted_mean(std::vector<double>{0.9, 0.1}, WeightVector{{1.0, 0.0}}), 0.9);
}

TEST(WeightedMean, DimensionMismatchThrows) {
  EXPECT_THROW(weighted_mean(std::vector<double>{0.1}, WeightVector{{0.5, 0.5}}), Error);
}

TEST(Choquet, TrioRewardsBalancedProfile) {
  auto dense = DenseCapacity::bind(capacity(0.3, 0.3, 0.4), math_french_spec());
  EXPECT_NEAR(20.0 * choquet(kTrio[0], dense), 13.0, 1e-9);
  EXPECT_NEAR(20.0 * choquet(kTrio[1], dense), 13.0, 1e-9);
  EXPECT_NEAR(20.0 * choquet(kTrio[2], dense), 15.0, 1e-9);
  EXPECT_NEAR(20.0 * choquet_oracle(kTrio[0], dense), 13.0, 1e-9);
  EXPECT_NEAR(20.0 * choquet_oracle(kTrio[1], dense), 13.0, 1e-9);
  EXPECT_NEAR(20.0 * choquet_oracle(kTrio[2], dense), 15.0, 1e-9);
}

TEST(Choquet, InvalidCapacityCarriesReport) {
  try {
    DenseCapacity::bind(capacity(-0.05, 0.75, 0.3), math_french_spec());
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_TRUE(e.report().has_rule("monotonicity"));
  }
}

TEST(Choquet, ZeroInteractionsReduceToWeightedMean) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const auto spec = unit_spec(2 + trial % 6);
    auto c = random_capacity(spec, rng, 0.0);
    auto dense = DenseCapacity::bind(c, spec);
    auto x = random_unit_vector(spec.size(), rng);
    EXPECT_NEAR(choquet(x, dense), weighted_mean(x, dense.additive_weights()), 1e-12);
  }
}

TEST(Choquet, ConstantProfileIsIdempotent) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const auto spec = unit_spec(2 + trial % 7);
    auto dense = DenseCapacity::bind(random_capacity(spec, rng), spec);
    const double c = unit(rng);
    std::vector<double> x(spec.size(), c);
    EXPECT_NEAR(choquet(x, dense), c, 1e-12);
    EXPECT_NEAR(choquet_oracle(x, dense), c, 1e-12);
  }
}

TEST(Choquet, MatchesSortingOracle) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 3000; ++trial) {
    const auto spec = unit_spec(2 + trial % 7);
    auto dense = DenseCapacity::bind(random_capacity(spec, rng), spec);
    auto x = random_unit_vector(spec.size(), rng);
    ASSERT_NEAR(choquet(x, dense), choquet_oracle(x, dense), 1e-9);
  }
}

TEST(Choquet, MonotoneInEachComponent) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 3000; ++trial) {
    const auto spec = unit_spec(2 + trial % 7);
    auto dense = DenseCapacity::bind(random_capacity(spec, rng), spec);
    auto x = random_unit_vector(spec.size(), rng);
    auto y = x;
    for (double& v : y) v = v + (1.0 - v) * unit(rng) * (unit(rng) < 0.5 ? 1.0 : 0.0);
    ASSERT_LE(choquet(x, dense), choquet(y, dense) + 1e-12);
  }
}

TEST(Choquet, SymmetricPositiveInteractionMakesBalancedProfileWin) {
  for (int step = 1; step <= 100; ++step) {
    const double interaction = step / 100.0;
    auto dense = DenseCapacity::bind(testing::symmetric_capacity("math", "french", interaction), math_french_spec());
    const double a = choquet(kTrio[0], dense), b = choquet(kTrio[1], dense), c = choquet(kTrio[2], dense);
    EXPECT_EQ(a, b);
    EXPECT_GT(c, a);
  }
}

TEST(Shapley, ComplementaryCapacity) {
  auto view = shapley_view(capacity(0.3, 0.3, 0.4), math_french_spec());
  EXPECT_DOUBLE_EQ(view.shapley.at("math"), 0.5);
  EXPECT_DOUBLE_EQ(view.shapley.at("french"), 0.5);
  EXPECT_DOUBLE_EQ(view.interactions.at(CriterionPair::of("math", "french")), 0.4);
}

TEST(Shapley, AdditiveCapacityHasNoInteractions) {
  auto view = shapley_view(capacity(0.7, 0.3, 0.0), math_french_spec());
  EXPECT_DOUBLE_EQ(view.shapley.at("math"), 0.7);
  EXPECT_DOUBLE_EQ(view.shapley.at("french"), 0.3);
  EXPECT_TRUE(view.interactions.empty());
}

TEST(Shapley, InverseOfComplementaryView) {
  ShapleyView view{{{"math", 0.5}, {"french", 0.5}}, {{CriterionPair::of("math", "french"), 0.4}}};
  auto c = capacity_from_shapley(view, math_french_spec());
  EXPECT_NEAR(c.singletons.at("math"), 0.3, 1e-15);
  EXPECT_NEAR(c.singletons.at("french"), 0.3, 1e-15);
  EXPECT_EQ(c.pairs.at(CriterionPair::of("math", "french")), 0.4);
}

TEST(Shapley, DictatorView) {
  const auto spec = unit_spec(4);
  ShapleyView view{{{"c0", 1.0}, {"c1", 0.0}, {"c2", 0.0}, {"c3", 0.0}}, {}};
  auto c = capacity_from_shapley(view, spec);
  EXPECT_EQ(c.singletons.at("c0"), 1.0);
  EXPECT_EQ(c.singletons.at("c3"), 0.0);
  EXPECT_TRUE(c.pairs.empty());
}

TEST(Shapley, NonMonotoneViewIsRejected) {
  // m_i = 0.5 - 0.6 = -0.1
  ShapleyView view{{{"math", 0.5}, {"french", 0.5}}, {{CriterionPair::of("math", "french"), 1.2}}};
  try {
    capacity_from_shapley(view, math_french_spec());
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_TRUE(e.report().has_rule("monotonicity"));
    EXPECT_FALSE(e.report().has_rule("normalization"));
  }
}

TEST(Shapley, RoundTripAndSumToOne) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto spec = unit_spec(2 + trial % 7);
    const auto c = random_capacity(spec, rng);
    const auto view = shapley_view(c, spec);
    double total = 0.0;
    for (const auto& [_, phi] : view.shapley) {
      total += phi;
      EXPECT_GE(phi, -1e-12);
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
    const auto back = capacity_from_shapley(view, spec);
    ASSERT_EQ(back.pairs.size(), c.pairs.size());
    for (const auto& [id, m] : c.singletons) EXPECT_NEAR(back.singletons.at(id), m, 1e-12);
    for (const auto& [pair, m] : c.pairs) EXPECT_NEAR(back.pairs.at(pair), m, 1e-12);
  }
}

}  // namespace
}  // namespace teamfit
