#include "conic/oracle.hpp"
#include "conic/nnls.hpp"
#include "conic/solvers.hpp"
#include "conic/cli/instance_gen.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace conic;
using namespace conic::oracle;
using conic::test::mat;
using conic::test::vec;

namespace {

// Brute force over basic solutions: every choice of rank-many columns.
double brute_force_lp(const LpProblem& lp, bool& feasible) {
  const Eigen::Index m = lp.equality.rows(), n = lp.equality.cols();
  double best = std::numeric_limits<double>::infinity();
  feasible = false;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (mask & (1u << j)) cols.push_back(j);
    }
    if (static_cast<Eigen::Index>(cols.size()) > m) continue;
    Matrix b(m, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) b.col(static_cast<Eigen::Index>(k)) = lp.equality.col(cols[k]);
    Vector lam = Vector::Zero(static_cast<Eigen::Index>(cols.size()));
    if (!cols.empty()) lam = b.colPivHouseholderQr().solve(lp.rhs);
    if ((b * lam - lp.rhs).norm() > 1e-9 || (lam.array() < -1e-12).any()) continue;
    feasible = true;
    double v = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) v += lp.objective(cols[k]) * lam(static_cast<Eigen::Index>(k));
    best = std::min(best, v);
  }
  return best;
}

}  // namespace

TEST(Simplex, SmallExamples) {
  // min x1 + 2 x2  s.t.  x1 + x2 = 1.
  LpProblem lp{vec({1, 2}), mat({{1, 1}}), vec({1})};
  LpResult r = simplex_solve(lp);
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_NEAR(r.value, 1.0, 1e-12);
  EXPECT_LE((r.solution - vec({1, 0})).norm(), 1e-12);

  lp = LpProblem{vec({1, 1}), mat({{1, 1}}), vec({-1})};
  EXPECT_EQ(simplex_solve(lp).status, LpStatus::Infeasible);

  lp = LpProblem{vec({-1, 0}), mat({{1, -1}}), vec({0})};
  EXPECT_EQ(simplex_solve(lp).status, LpStatus::Unbounded);
}

TEST(Simplex, DegenerateAndRedundantRows) {
  LpProblem lp{vec({1, 1, 0}), mat({{1, 1, 1}, {2, 2, 2}}), vec({0, 0})};
  const LpResult r = simplex_solve(lp);
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_NEAR(r.value, 0.0, 1e-12);
}

TEST(Simplex, SizeLimit) {
  LpProblem lp{Vector::Zero(kSimplexMaxVariables + 1), Matrix::Ones(1, kSimplexMaxVariables + 1), vec({1})};
  EXPECT_THROW(simplex_solve(lp), std::invalid_argument);
}

TEST(Simplex, MatchesBasicSolutionEnumeration) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> dim_m(1, 3), dim_n(2, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index m = dim_m(rng), n = dim_n(rng);
    LpProblem lp{test::gaussian(rng, n).cwiseAbs(), test::gaussian(rng, m, n), test::gaussian(rng, m)};
    if (trial % 2) lp.objective = test::gaussian(rng, n);
    bool feasible = false;
    const double expected = brute_force_lp(lp, feasible);
    const LpResult r = simplex_solve(lp);
    if (!feasible) {
      EXPECT_EQ(r.status, LpStatus::Infeasible) << "trial " << trial;
    } else if (r.status == LpStatus::Optimal) {
      EXPECT_NEAR(r.value, expected, 1e-8 * (1 + std::abs(expected))) << "trial " << trial;
      EXPECT_LE((lp.equality * r.solution - lp.rhs).norm(), 1e-9 * (1 + lp.rhs.norm()));
      EXPECT_GE(r.solution.minCoeff(), -1e-12);
    } else {
      // An unbounded program has an improving ray; the enumeration only sees vertices.
      EXPECT_EQ(r.status, LpStatus::Unbounded) << "trial " << trial;
      EXPECT_FALSE(lp.objective.minCoeff() >= 0.0) << "trial " << trial;
    }
  }
}

TEST(Simplex, DualMultipliersCertifyOptimality) {
  std::mt19937_64 rng(13);
  int optimal = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index m = 1 + trial % 3, n = 3 + trial % 4;
    LpProblem lp{test::gaussian(rng, n).cwiseAbs(), test::gaussian(rng, m, n), test::gaussian(rng, m)};
    const LpResult r = simplex_solve(lp);
    if (r.status != LpStatus::Optimal) continue;
    ++optimal;
    ASSERT_EQ(r.duals.size(), m);
    EXPECT_LE((lp.equality.transpose() * r.duals - lp.objective).maxCoeff(), 1e-9) << "trial " << trial;
    EXPECT_NEAR(lp.rhs.dot(r.duals), r.value, 1e-9 * (1 + std::abs(r.value))) << "trial " << trial;

    const auto w = central_duals(lp, r);
    ASSERT_TRUE(w.has_value());
    EXPECT_LE((lp.equality.transpose() * *w - lp.objective).maxCoeff(), 1e-9);
    EXPECT_NEAR(lp.rhs.dot(*w), r.value, 1e-9 * (1 + std::abs(r.value)));
  }
  EXPECT_GT(optimal, 20);
}

TEST(Simplex, CentralDualsLeaveSlackOffSupport) {
  // min l1 + l2 s.t. l1 = 2: any w1 = 1 is optimal, and w1 <= 1 ties the second column
  // only at a vertex.
  LpProblem lp{vec({1, 1}), mat({{1, 0}}), vec({2})};
  const LpResult r = simplex_solve(lp);
  ASSERT_EQ(r.status, LpStatus::Optimal);
  const auto w = central_duals(lp, r);
  ASSERT_TRUE(w.has_value());
  EXPECT_NEAR((*w)(0), 1.0, 1e-12);

  // Two columns both needed: no slack to gain, the multipliers stay optimal.
  LpProblem both{vec({1, 1}), mat({{1, 0}, {0, 1}}), vec({1, 1})};
  const auto wb = central_duals(both, simplex_solve(both));
  ASSERT_TRUE(wb.has_value());
  EXPECT_LE((*wb - vec({1, 1})).norm(), 1e-12);
}

TEST(Nnls, Examples) {
  const NnlsResult a = nnls(Matrix::Identity(2, 2), vec({1, -1}), 100, 1e-12);
  EXPECT_TRUE(a.converged);
  EXPECT_LE((a.coefficients - vec({1, 0})).norm(), 1e-12);
  EXPECT_NEAR(a.residual_norm, 1.0, 1e-12);

  const NnlsResult b = nnls(mat({{1, 1}, {0, 1}}), vec({2, 1}), 100, 1e-12);
  EXPECT_LE((b.coefficients - vec({1, 1})).norm(), 1e-12);
  EXPECT_LE(b.residual_norm, 1e-12);
}

TEST(Nnls, KktConditionsOnRandomProblems) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix r = test::gaussian(rng, 6, 4);
    const Vector x = test::gaussian(rng, 6);
    const NnlsResult out = nnls(r, x, 200, 1e-12);
    ASSERT_TRUE(out.converged);
    const Vector grad = r.transpose() * (x - r * out.coefficients);
    EXPECT_GE(out.coefficients.minCoeff(), 0.0);
    EXPECT_LE(grad.maxCoeff(), 1e-9);
    for (Eigen::Index j = 0; j < 4; ++j) {
      if (out.coefficients(j) > 0) EXPECT_NEAR(grad(j), 0.0, 1e-9);
    }
  }
}

TEST(PrimalReference, UniquenessExample) {
  const ReferenceResult r = primal_reference(test::uniqueness_instance());
  EXPECT_TRUE(r.converged);
  EXPECT_LE((r.x - vec({1, 0})).norm(), 1e-8);
  EXPECT_NEAR(r.pi, 0.5, 1e-8);
}

TEST(PrimalReference, SlackCoversTarget) {
  const ReferenceResult r = primal_reference(test::uniqueness_instance(2.0));
  EXPECT_LE(r.x.norm(), 1e-12);
}

TEST(PrimalReference, WithSlack) {
  const ReferenceResult r = primal_reference(test::uniqueness_instance(0.25));
  EXPECT_LE((r.x - vec({0.75, 0})).norm(), 1e-7);
}

TEST(PrimalReference, TangentSecondOrderConeIsSlow) {
  // Alternating projections crawl along the tangency; only a coarse match is expected.
  ReferenceConfig cfg;
  cfg.max_iter = 200'000;
  const ReferenceResult r = primal_reference(test::tangent_soc_instance(), cfg);
  EXPECT_LE((r.x - vec({0.5, 0, 0.5})).norm(), 5e-2);
}

TEST(PrimalReference, MatchesDualOnRandomOrthantInstances) {
  for (int id = 0; id < 10; ++id) {
    std::mt19937_64 rng(40 + id);
    const auto g =
        cli::generate_instance(rng, cli::Regime::Feasible, cli::ConeFamily::Orthant, 3, 5, id % 2 ? 0.1 : 0.0);
    const ReferenceResult ref = primal_reference(g.instance);
    const SolveReport dual = minimize_dual(g.instance, SolverConfig{});
    EXPECT_NEAR(ref.pi, -dual.best_value, 1e-6 * (1 + ref.pi)) << "instance " << id;
  }
}

TEST(PrimalReference, RejectsEmptyResidualSet) {
  // Ax = b has no solution at all.
  const Instance inst(LinearMap(mat({{1, 0}, {1, 0}})), vec({1, -1}), GeneratorSet::ball_cap(Cone::orthant(2)), 0.0);
  EXPECT_THROW(primal_reference(inst), std::invalid_argument);
}

TEST(ResidualBallProjector, AffineAndBall) {
  const ResidualBallProjector affine(mat({{1, 1}}), vec({2}), 0.0);
  EXPECT_LE((affine.project(vec({0, 0})) - vec({1, 1})).norm(), 1e-12);

  const ResidualBallProjector ball(Matrix::Identity(2, 2), vec({0, 0}), 1.0);
  EXPECT_LE((ball.project(vec({3, 4})) - vec({0.6, 0.8})).norm(), 1e-9);
  EXPECT_LE((ball.project(vec({0.1, 0.2})) - vec({0.1, 0.2})).norm(), 1e-15);
}

TEST(ConjugateGrid, MatchesClosedForm) {
  // Conjugate of 1/2 gauge^2 is 1/2 sigma^2.
  const GeneratorSet cap = GeneratorSet::ball_cap(Cone::orthant(2));
  const Vector z = vec({0.6, -0.4});
  const double expected = 0.5 * std::pow(cap.support_value(z), 2);
  EXPECT_NEAR(conjugate_grid_check(cap, z, 2.0, 201), expected, 0.02 * expected + 1e-4);

  const GeneratorSet box = GeneratorSet::box(vec({1, 2}));
  const Vector w = vec({0.5, 0.25});
  const double box_expected = 0.5 * std::pow(box.support_value(w), 2);
  EXPECT_NEAR(conjugate_grid_check(box, w, 3.0, 201), box_expected, 0.02 * box_expected + 1e-4);
}

TEST(VertexEnumerate, Examples) {
  const auto v = vertex_enumerate({vec({1, 0}), vec({0.5, 0}), vec({0, 1}), vec({0.2, 0.2})});
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[0], vec({1, 0}));
  EXPECT_EQ(v[1], vec({0, 1}));
  EXPECT_EQ(v[2], Vector::Zero(2));

  // All points on one side of a line through the origin keep the origin as a vertex.
  const auto w = vertex_enumerate({vec({1, 1}), vec({-1, 1})});
  EXPECT_EQ(w.size(), 3u);
}

TEST(VertexEnumerate, OriginInsideHull) {
  const auto v = vertex_enumerate({vec({1, 0}), vec({-1, 1}), vec({-1, -1})});
  ASSERT_EQ(v.size(), 3u);
  for (const auto& p : v) EXPECT_GT(p.norm(), 0.0);
}

TEST(VertexEnumerate, AgreesWithExtremalityCheck) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Vector> pts;
    for (int i = 0; i < 6; ++i) pts.push_back(test::gaussian(rng, 3));
    const auto v = vertex_enumerate(pts);
    const ExtremalityReport rep = extremality_check(pts);
    std::size_t nonzero = 0;
    for (const auto& p : v) nonzero += p.norm() > 0.0;
    EXPECT_EQ(nonzero + rep.non_extreme.size(), pts.size()) << "trial " << trial;
  }
}

TEST(VertexEnumerate, Limits) {
  std::vector<Vector> many(kVertexMaxPoints + 1, vec({1, 0}));
  EXPECT_THROW(vertex_enumerate(many), std::invalid_argument);
  EXPECT_THROW(vertex_enumerate({Vector::Ones(kVertexMaxDim + 1)}), std::invalid_argument);
}

TEST(ConjugateGrid, ZoomTightensLowerBound) {
  const GeneratorSet box = GeneratorSet::box(vec({1, 1.5}));
  const Vector z = vec({0.7, 0.4});
  const double exact = 0.5 * std::pow(box.support_value(z), 2);
  const double coarse = conjugate_grid_check(box, z, 3.0, 21);
  const double fine = conjugate_grid_check(box, z, 3.0, 21, 6);
  EXPECT_LE(coarse, exact + 1e-12);
  EXPECT_LE(fine, exact + 1e-12);
  EXPECT_GE(fine, coarse);
  EXPECT_NEAR(fine, exact, 1e-3 * exact);
}
