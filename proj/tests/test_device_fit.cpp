#include <gtest/gtest.h>

#include <random>

#include "teamfit/device_fit.hpp"
#include "test_support.hpp"

namespace teamfit {
namespace {

using testing::math_french_spec;
using testing::raw_profile;

FunctionSpec fn(std::string id, std::map<std::string, double> req, double importance = 1.0) {
  return {id, id, std::move(req), importance};
}

TEST(FunctionUsable, EmptyRequirementsAlwaysUsable) {
  EXPECT_TRUE(function_usable(raw_profile("p", 0, 0), math_french_spec(), fn("f", {}), {}));
}

TEST(FunctionUsable, ProjectionCanUnlockAFunction) {
  Profile p = raw_profile("p", 10, 0);
  p.growth_rates["math"] = 2.0;
  EXPECT_TRUE(function_usable(p, math_french_spec(), fn("f", {{"math", 12.0}}), {1.0}));
  EXPECT_FALSE(function_usable(p, math_french_spec(), fn("f", {{"math", 12.0}}), {0.0}));
}

TEST(FunctionUsable, UnknownCriterionThrows) {
  EXPECT_THROW(function_usable(raw_profile("p", 1, 1), math_french_spec(), fn("f", {{"physics", 1.0}}), {}), Error);
}

TEST(Utilization, ImportanceWeightedFraction) {
  DeviceSpec d{"d", {fn("easy", {}, 3.0), fn("hard", {{"math", 20.0}}, 1.0)}};
  EXPECT_DOUBLE_EQ(utilization_score(raw_profile("p", 5, 5), math_french_spec(), d, {}), 0.75);
  EXPECT_DOUBLE_EQ(utilization_score(raw_profile("p", 20, 5), math_french_spec(), d, {}), 1.0);
  EXPECT_EQ(utilization_score(raw_profile("p", 20, 5), math_french_spec(), DeviceSpec{"empty", {}}, {}), 0.0);
}

TEST(Utilization, ZeroImportanceFunctionIsNotCounted) {
  DeviceSpec d{"d", {fn("seen", {}, 1.0), fn("hidden", {{"math", 20.0}}, 0.0)}};
  EXPECT_EQ(utilization_score(raw_profile("p", 0, 0), math_french_spec(), d, {}), 1.0);
}

std::vector<Profile> four() {
  return {raw_profile("a", 15, 0), raw_profile("b", 12, 0), raw_profile("c", 18, 0), raw_profile("d", 3, 0)};
}

TEST(Coverage, CountsAbleIndividuals) {
  DeviceSpec d{"d", {fn("calc", {{"math", 10.0}}), fn("open", {})}};
  auto pop = four();
  auto report = population_coverage(pop, math_french_spec(), d, {});
  EXPECT_EQ(report.per_function.at("calc"), 0.75);
  EXPECT_EQ(report.per_function.at("open"), 1.0);
  EXPECT_EQ(report.per_individual.at("d"), 0.5);
}

TEST(Coverage, SingleCapableProfileAndUnsatisfiableRequirement) {
  DeviceSpec d{"d", {fn("x", {{"math", 5.0}}), fn("y", {{"french", 5.0}}), fn("impossible", {{"math", 25.0}})}};
  std::vector<Profile> pop{raw_profile("p", 20, 20)};
  auto report = population_coverage(pop, math_french_spec(), d, {});
  EXPECT_EQ(report.per_function.at("x"), 1.0);
  EXPECT_EQ(report.per_function.at("y"), 1.0);
  EXPECT_EQ(report.per_function.at("impossible"), 0.0);
  EXPECT_TRUE(validate_device(d, math_french_spec()).has_rule("requirement_out_of_scale"));
}

TEST(Coverage, EmptyPopulationThrows) {
  EXPECT_THROW(population_coverage(std::vector<Profile>{}, math_french_spec(), DeviceSpec{"d", {}}, {}), Error);
}

TEST(Recommend, ThresholdPartitionsFunctions) {
  DeviceSpec d{"d", {fn("calc", {{"math", 10.0}}), fn("open", {}), fn("elite", {{"math", 16.0}})}};
  auto pop = four();
  auto all = recommend_functions(pop, math_french_spec(), d, {}, 0.0);
  EXPECT_EQ(all.recommended.size(), 3u);
  EXPECT_TRUE(all.excluded.empty());

  auto strict = recommend_functions(pop, math_french_spec(), d, {}, 1.0);
  ASSERT_EQ(strict.recommended.size(), 1u);
  EXPECT_EQ(strict.recommended[0].id, "open");
  ASSERT_EQ(strict.excluded.size(), 2u);
  EXPECT_EQ(strict.excluded[0].id, "calc");  // 0.75 before 0.25
  EXPECT_EQ(strict.excluded[1].id, "elite");

  auto boundary = recommend_functions(pop, math_french_spec(), d, {}, 0.75);
  ASSERT_EQ(boundary.recommended.size(), 2u);
  EXPECT_EQ(boundary.recommended[1].id, "calc");
  EXPECT_EQ(boundary.recommended[1].coverage, 0.75);

  EXPECT_THROW(recommend_functions(pop, math_french_spec(), d, {}, 1.5), Error);
}

TEST(Recommend, TiesSortedById) {
  DeviceSpec d{"d", {fn("zeta", {}), fn("alpha", {})}};
  auto pop = four();
  auto rec = recommend_functions(pop, math_french_spec(), d, {}, 0.0);
  EXPECT_EQ(rec.recommended[0].id, "alpha");
  EXPECT_EQ(rec.recommended[1].id, "zeta");
}

TEST(DeviceProperties, HorizonAndRelaxationMonotone) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto spec = math_french_spec();
  for (int trial = 0; trial < 300; ++trial) {
    auto pop = testing::random_population(spec, 6, rng, true);
    DeviceSpec d{"d", {}};
    for (int f = 0; f < 4; ++f) {
      std::map<std::string, double> req;
      if (unit(rng) < 0.7) req["math"] = 20 * unit(rng);
      if (unit(rng) < 0.7) req["french"] = 20 * unit(rng);
      d.functions.push_back(fn("f" + std::to_string(f), req, unit(rng) < 0.2 ? 0.0 : unit(rng)));
    }
    const double t1 = 5 * unit(rng), t2 = t1 + 5 * unit(rng);
    auto a = population_coverage(pop, spec, d, {t1});
    auto b = population_coverage(pop, spec, d, {t2});
    for (const auto& [id, c] : a.per_function) EXPECT_LE(c, b.per_function.at(id));
    for (const auto& [id, u] : a.per_individual) {
      EXPECT_LE(u, b.per_individual.at(id));
      EXPECT_GE(u, 0.0);
      EXPECT_LE(u, 1.0);
    }

    DeviceSpec relaxed = d;
    for (auto& f : relaxed.functions)
      for (auto& [_, minimum] : f.requirements) minimum *= unit(rng);
    auto r = population_coverage(pop, spec, relaxed, {t1});
    for (const auto& [id, c] : a.per_function) EXPECT_LE(c, r.per_function.at(id));

    auto rec = recommend_functions(a, unit(rng));
    EXPECT_EQ(rec.recommended.size() + rec.excluded.size(), d.functions.size());
  }
}

}  // namespace
}  // namespace teamfit
