#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "teamfit/prototype_classes.hpp"
#include "test_support.hpp"

namespace teamfit {
namespace {

NormalizedProfile np(std::string id, std::vector<double> v) { return {std::move(id), std::move(v)}; }

Prototype proto(std::string id, std::vector<double> ideal, std::vector<double> weights = {}) {
  if (weights.empty()) weights.assign(ideal.size(), 1.0);
  return {id, {id, std::move(ideal)}, std::move(weights)};
}

TEST(BuildPrototype, IdealPointAndCentroid) {
  std::vector<NormalizedProfile> ex{np("a", {0.9, 0.2}), np("b", {0.4, 0.8})};
  auto ideal = build_prototype(ex, PrototypeMode::ideal_point, "k", {1, 1});
  EXPECT_EQ(ideal.ideal.values, (std::vector<double>{0.9, 0.8}));
  auto centroid = build_prototype(ex, PrototypeMode::centroid, "k", {1, 1});
  EXPECT_NEAR(centroid.ideal.values[0], 0.65, 1e-15);
  EXPECT_NEAR(centroid.ideal.values[1], 0.5, 1e-15);
}

TEST(BuildPrototype, SingleExemplarIsIdentity) {
  std::vector<NormalizedProfile> ex{np("a", {0.3, 0.7})};
  for (auto mode : {PrototypeMode::ideal_point, PrototypeMode::centroid})
    EXPECT_EQ(build_prototype(ex, mode, "k", {1, 1}).ideal.values, ex[0].values);
}

TEST(BuildPrototype, Errors) {
  std::vector<NormalizedProfile> none;
  EXPECT_THROW(build_prototype(none, PrototypeMode::centroid, "k", {}), Error);
  std::vector<NormalizedProfile> mixed{np("a", {0.1}), np("b", {0.1, 0.2})};
  EXPECT_THROW(build_prototype(mixed, PrototypeMode::centroid, "k", {1}), Error);
  std::vector<NormalizedProfile> ok{np("a", {0.1, 0.2})};
  EXPECT_THROW(build_prototype(ok, PrototypeMode::centroid, "k", {0, 0}), ValidationError);
}

TEST(Distance, SelfExceedingAndShortfall) {
  auto p = proto("A", {1, 1});
  EXPECT_EQ(distance(np("x", {1, 1}), p), 0.0);
  EXPECT_NEAR(distance(np("x", {0.3, 0.8}), p), 0.7, 1e-15);
  auto q = proto("B", {0.4, 0.6});
  EXPECT_EQ(distance(np("x", {0.5, 0.9}), q), 0.0);
  EXPECT_THROW(distance(np("x", {0.5}), q), Error);
}

TEST(Distance, EuclideanAlternative) {
  auto p = proto("A", {1, 1});
  EXPECT_NEAR(distance(np("x", {0.3, 0.8}), p, Metric::euclidean), std::sqrt(0.53), 1e-15);
  EXPECT_NEAR(max_distance(p, Metric::euclidean), std::sqrt(2.0), 1e-15);
}

TEST(Membership, IdealProfileBelongsForAnyThreshold) {
  ClassModel model{{proto("A", {0.6, 0.9})}, 1.0};
  auto r = membership_degrees(np("x", {0.6, 0.9}), model);
  EXPECT_EQ(r.degrees.at("A"), 1.0);
  EXPECT_TRUE(r.assigned.count("A"));
}

TEST(Membership, DistantProfileNotAssigned) {
  ClassModel model{{proto("A", {1, 1})}, 0.5};
  auto r = membership_degrees(np("x", {0.3, 0.8}), model);
  EXPECT_NEAR(r.degrees.at("A"), 0.3, 1e-15);
  EXPECT_NEAR(r.distances.at("A"), 0.7, 1e-15);
  EXPECT_TRUE(r.assigned.empty());
}

TEST(Membership, OverlappingPrototypesClaimTheSameProfile) {
  ClassModel model{{proto("A", {1.0, 0.5}), proto("B", {0.5, 1.0})}, 0.5};
  auto r = membership_degrees(np("platypus", {1.0, 1.0}), model);
  EXPECT_EQ(r.assigned, (std::set<std::string>{"A", "B"}));
}

TEST(Membership, ZeroIdealAlwaysFullDegree) {
  ClassModel model{{proto("A", {0.0, 0.0})}, 1.0};
  EXPECT_EQ(membership_degrees(np("x", {0.0, 0.0}), model).degrees.at("A"), 1.0);
}

TEST(Minorities, EveryProfileAtSomeIdeal) {
  ClassModel model{{proto("A", {1.0, 0.5}), proto("B", {0.5, 1.0})}, 0.5};
  std::vector<NormalizedProfile> pop{np("a", {1.0, 0.5}), np("b", {0.5, 1.0})};
  EXPECT_TRUE(relevant_minorities(pop, model).empty());
}

TEST(Minorities, SingleUnclaimedProfile) {
  ClassModel model{{proto("A", {1, 1})}, 0.5};
  std::vector<NormalizedProfile> pop{np("lonely", {0.1, 0.1})};
  EXPECT_EQ(relevant_minorities(pop, model), std::vector<std::string>{"lonely"});
}

TEST(Minorities, NearestFirst) {
  ClassModel model{{proto("A", {1, 1})}, 0.5};
  // degrees 1 - 0.8 = 0.2 and 1 - 0.55 = 0.45
  std::vector<NormalizedProfile> pop{np("a", {0.2, 1.0}), np("b", {0.45, 1.0}), np("member", {0.9, 0.9})};
  auto ids = relevant_minorities(pop, model);
  EXPECT_EQ(ids, (std::vector<std::string>{"b", "a"}));
  EXPECT_NEAR(membership_degrees(pop[1], model).max_degree(), 0.45, 1e-12);
}

TEST(Minorities, TiesByAscendingId) {
  ClassModel model{{proto("A", {1, 1})}, 0.9};
  std::vector<NormalizedProfile> pop{np("z", {0.5, 1.0}), np("m", {1.0, 0.5})};
  EXPECT_EQ(relevant_minorities(pop, model), (std::vector<std::string>{"m", "z"}));
}

TEST(MembershipProperties, RangeMonotonicityAndPurity) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 2 + trial % 5;
    auto ideal = testing::random_unit_vector(n, rng);
    auto weights = testing::random_unit_vector(n, rng);
    weights[0] += 0.01;
    Prototype p = proto("A", ideal, weights);
    const auto metric = trial % 3 == 0 ? Metric::euclidean : Metric::chebyshev;
    ClassModel model{{p}, 0.05 + 0.95 * unit(rng), metric};

    NormalizedProfile x{"x", testing::random_unit_vector(n, rng)};
    const double degree = membership_degree(x, p, metric);
    ASSERT_GE(degree, 0.0);
    ASSERT_LE(degree, 1.0);
    if (max_distance(p, metric) > 0) {
      EXPECT_EQ(degree == 1.0, distance(x, p, metric) == 0.0);
    }

    NormalizedProfile y = x;
    const std::size_t i = trial % n;
    y.values[i] = y.values[i] + (1.0 - y.values[i]) * unit(rng);
    EXPECT_GE(membership_degree(y, p, metric), degree);

    auto first = membership_degrees(x, model);
    auto second = membership_degrees(x, model);
    EXPECT_EQ(first.degrees, second.degrees);
    EXPECT_EQ(first.assigned, second.assigned);
    for (const auto& [cls, d] : first.degrees) EXPECT_EQ(first.assigned.count(cls) == 1, d >= model.membership_threshold);
  }
}

// Memberships depend on raw profiles only through their normalization, so an
// affine change of any raw scale leaves them unchanged.
TEST(MembershipProperties, ScaleInvariance) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> unit(0.0, 1.0), offset(-100, 100), factor(0.1, 50);
  for (int trial = 0; trial < 500; ++trial) {
    const auto base = testing::unit_spec(3);
    auto rescaled = base;
    for (auto& c : rescaled.criteria) {
      c.scale_min = offset(rng);
      c.scale_max = c.scale_min + factor(rng);
    }
    ClassModel model{{proto("A", testing::random_unit_vector(3, rng)), proto("B", testing::random_unit_vector(3, rng))},
                     0.5};
    Profile a{"x", {}, {}, 1.0}, b{"x", {}, {}, 1.0};
    for (std::size_t i = 0; i < 3; ++i) {
      const double u = unit(rng);
      a.scores[base.criteria[i].id] = base.criteria[i].denormalize(u);
      b.scores[rescaled.criteria[i].id] = rescaled.criteria[i].denormalize(u);
    }
    auto ra = membership_degrees(normalize_profile(a, base), model);
    auto rb = membership_degrees(normalize_profile(b, rescaled), model);
    for (const auto& [cls, d] : ra.degrees) EXPECT_NEAR(rb.degrees.at(cls), d, 1e-9);
  }
}

TEST(ClassModel, Validation) {
  ClassModel model{{proto("A", {0.5, 1.5}), proto("A", {0.5, 0.5}, {0, 0})}, 0.0};
  auto report = validate_class_model(model, 2);
  EXPECT_TRUE(report.has_rule("duplicate_id"));
  EXPECT_TRUE(report.has_rule("ideal_out_of_range"));
  EXPECT_TRUE(report.has_rule("zero_weights"));
  EXPECT_TRUE(report.has_rule("threshold_out_of_range"));
  EXPECT_THROW(model.prototype("missing"), NotFoundError);
}

}  // namespace
}  // namespace teamfit
