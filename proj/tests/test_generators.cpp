#include "conic/generators.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace conic;
using conic::test::vec;

namespace {

GeneratorSet two_points() { return GeneratorSet::polytope({vec({1, 0}), vec({0, 1})}); }

}  // namespace

TEST(SupportValue, Examples) {
  EXPECT_DOUBLE_EQ(GeneratorSet::ball_cap(Cone::orthant(2)).support_value(vec({3, -4})), 3.0);
  EXPECT_DOUBLE_EQ(two_points().support_value(vec({2, 1})), 2.0);
  EXPECT_DOUBLE_EQ(GeneratorSet::box(vec({1.5, 0.75})).support_value(vec({1, -1})), 1.5);
}

TEST(SupportValue, BallCapEqualsProjectionNorm) {
  std::mt19937_64 rng(10);
  const Cone k = Cone::second_order(4, 0.8);
  const GeneratorSet g = GeneratorSet::ball_cap(k);
  for (int i = 0; i < 100; ++i) {
    const Vector z = test::gaussian(rng, 4);
    EXPECT_NEAR(g.support_value(z), k.project(z).norm(), 1e-12);
  }
}

TEST(SupportValue, NonnegativeAndHomogeneous) {
  std::mt19937_64 rng(11);
  const std::vector<GeneratorSet> sets = {GeneratorSet::ball_cap(Cone::orthant(3)),
                                          GeneratorSet::polytope({vec({1, 2, 0}), vec({-1, 0, 1}), vec({0, 0, 3})}),
                                          GeneratorSet::box(vec({1, 0.5, 2}))};
  for (const auto& g : sets) {
    for (int i = 0; i < 50; ++i) {
      const Vector z = test::gaussian(rng, 3);
      const double s = g.support_value(z);
      EXPECT_GE(s, 0.0);
      EXPECT_NEAR(g.support_value(3.7 * z), 3.7 * s, 1e-10 * (1 + s));
      const Vector x = test::gaussian(rng, 3);
      const double j = g.gauge(x);
      if (std::isfinite(j)) EXPECT_NEAR(g.gauge(2.2 * x), 2.2 * j, 1e-10 * (1 + j));
    }
  }
}

TEST(SupportFace, Examples) {
  const GeneratorSet cap = GeneratorSet::ball_cap(Cone::orthant(2));
  SupportFace f = cap.support_face(vec({3, -4}));
  EXPECT_DOUBLE_EQ(f.value, 3.0);
  EXPECT_LE((f.witness - vec({1, 0})).norm(), 1e-15);
  EXPECT_FALSE(f.singular);

  f = cap.support_face(vec({-1, -1}));
  EXPECT_EQ(f.value, 0.0);
  EXPECT_EQ(f.witness, Vector::Zero(2));
  EXPECT_TRUE(f.singular);

  f = two_points().support_face(vec({1, 1}));
  EXPECT_DOUBLE_EQ(f.value, 1.0);
  EXPECT_TRUE(f.singular);
}

TEST(SupportFace, WitnessAttainsValue) {
  std::mt19937_64 rng(12);
  const std::vector<GeneratorSet> sets = {GeneratorSet::ball_cap(Cone::second_order(3)),
                                          GeneratorSet::polytope({vec({1, 2, 0}), vec({-1, 0, 1})}),
                                          GeneratorSet::box(vec({1, 0.5, 2}))};
  for (const auto& g : sets) {
    for (int i = 0; i < 50; ++i) {
      const Vector z = test::gaussian(rng, 3);
      const SupportFace f = g.support_face(z);
      EXPECT_NEAR(z.dot(f.witness), f.value, 1e-10);
      EXPECT_LE(g.gauge(f.witness), 1.0 + 1e-9);
    }
  }
}

TEST(SupportFace, BoxSingularOnZeroComponent) {
  const GeneratorSet box = GeneratorSet::box(vec({1, 2}));
  EXPECT_TRUE(box.support_face(vec({1, 0})).singular);
  EXPECT_FALSE(box.support_face(vec({1, -1})).singular);
  EXPECT_FALSE(GeneratorSet::box(vec({1, 0})).support_face(vec({1, 0})).singular);
}

TEST(Gauge, Examples) {
  const GeneratorSet cap = GeneratorSet::ball_cap(Cone::orthant(2));
  EXPECT_DOUBLE_EQ(cap.gauge(vec({3, 4})), 5.0);
  EXPECT_TRUE(std::isinf(cap.gauge(vec({-1, 0}))));
  EXPECT_NEAR(two_points().gauge(vec({2, 2})), 4.0, 1e-12);
  EXPECT_TRUE(std::isinf(two_points().gauge(vec({-1, 1}))));
}

TEST(Gauge, BoxRules) {
  const GeneratorSet box = GeneratorSet::box(vec({2, 0}));
  EXPECT_DOUBLE_EQ(box.gauge(vec({1, 0})), 0.5);
  EXPECT_TRUE(std::isinf(box.gauge(vec({1, 0.1}))));
  EXPECT_TRUE(std::isinf(box.gauge(vec({-1, 0}))));
}

TEST(Gauge, PolytopeGaugeMatchesBruteForce) {
  // Brute-force: x = t * v with v on the boundary of conv{p1, p2, 0}; scan the segment [p1, p2].
  const Vector p1 = vec({2, 0.5}), p2 = vec({0.5, 1.5});
  const GeneratorSet g = GeneratorSet::polytope({p1, p2});
  for (double s : {0.1, 0.3, 0.5, 0.9}) {
    const Vector x = 1.7 * ((1 - s) * p1 + s * p2);
    EXPECT_NEAR(g.gauge(x), 1.7, 1e-10);
  }
}

TEST(ScaledSubgradient, Examples) {
  ScaledSubgradient s = GeneratorSet::ball_cap(Cone::orthant(2)).scaled_subgradient(vec({3, -4}));
  EXPECT_LE((s.point - vec({3, 0})).norm(), 1e-14);
  EXPECT_TRUE(s.unique);

  s = two_points().scaled_subgradient(vec({-1, -2}));
  EXPECT_EQ(s.point, Vector::Zero(2));
  EXPECT_TRUE(s.unique);

  s = two_points().scaled_subgradient(vec({1, 1}));
  EXPECT_TRUE((s.point - vec({1, 0})).norm() < 1e-12 || (s.point - vec({0, 1})).norm() < 1e-12);
  EXPECT_FALSE(s.unique);
}

TEST(InPolar, Examples) {
  EXPECT_TRUE(GeneratorSet::ball_cap(Cone::orthant(2)).in_polar(vec({-1, -1}), 0.0));
  EXPECT_TRUE(GeneratorSet::polytope({vec({1, 0})}).in_polar(vec({0, 5}), 0.0));
  EXPECT_TRUE(GeneratorSet::box(vec({1.5, 0.75})).in_polar(vec({-2, -3}), 0.0));
  EXPECT_FALSE(GeneratorSet::box(vec({1.5, 0.75})).in_polar(vec({-2, 3}), 0.0));
}

TEST(InPolar, BoxAgreesWithSampling) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Vector upper = vec({1.5, 0.75});
  const Vector z = vec({-2, -3});
  for (int i = 0; i < 1000; ++i) {
    const Vector v = vec({upper(0) * u(rng), upper(1) * u(rng)});
    EXPECT_LE(z.dot(v), 0.0);
  }
}

TEST(Extremality, AllVerticesListed) {
  const ExtremalityReport r = extremality_check({vec({1, 0}), vec({0, 1})});
  EXPECT_TRUE(r.holds);
  EXPECT_TRUE(r.violating.empty());
  EXPECT_TRUE(r.non_extreme.empty());
}

TEST(Extremality, MidpointFlaggedNonExtreme) {
  const ExtremalityReport r = extremality_check({vec({1, 0}), vec({0, 1}), vec({0.5, 0.5})});
  EXPECT_TRUE(r.holds);
  ASSERT_EQ(r.non_extreme.size(), 1u);
  EXPECT_LE((r.non_extreme[0] - vec({0.5, 0.5})).norm(), 1e-15);
}

TEST(Extremality, MissingVertexOfSuppliedHull) {
  const ExtremalityReport r = extremality_check({vec({2, 0})}, {vec({2, 0}), vec({1, 1})});
  EXPECT_FALSE(r.holds);
  ASSERT_EQ(r.violating.size(), 1u);
  EXPECT_LE((r.violating[0] - vec({1, 1})).norm(), 1e-15);
}

TEST(GeneratorSet, Validation) {
  EXPECT_THROW(GeneratorSet::box(vec({1, -1})), std::invalid_argument);
  EXPECT_THROW(GeneratorSet::polytope({}), std::invalid_argument);
  EXPECT_THROW(GeneratorSet::polytope({vec({1, 0}), vec({1, 0, 0})}), std::invalid_argument);
  EXPECT_THROW(two_points().support_value(vec({1, 2, 3})), DimensionError);
}
