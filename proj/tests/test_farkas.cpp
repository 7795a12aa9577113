#include "conic/farkas.hpp"
#include "conic/cli/instance_gen.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace conic;
using conic::test::mat;
using conic::test::vec;

namespace {

Instance orthant_instance(const Matrix& a, const Vector& b, double eps) {
  return Instance(LinearMap(a), b, GeneratorSet::ball_cap(Cone::orthant(a.cols())), eps);
}

}  // namespace

TEST(SolveApproximate, UniquenessExampleWithSlack) {
  const Outcome out = solve_approximate(test::uniqueness_instance(0.25), SolverConfig{});
  ASSERT_EQ(out.verdict, Verdict::Feasible);
  EXPECT_LE((*out.x - vec({0.75, 0})).norm(), 1e-4);
  EXPECT_EQ(out.dual_attained, DualAttainment::Yes);
  EXPECT_TRUE(out.unique_recovery);
  EXPECT_NEAR(*out.pi, 0.5 * 0.75 * 0.75, 1e-6);
  EXPECT_LE(std::abs(*out.gap), 1e-6);
}

TEST(SolveApproximate, InfeasibleTargetGetsCertificate) {
  const Outcome out = solve_approximate(orthant_instance(Matrix::Identity(2, 2), vec({-1, 0}), 0.5), SolverConfig{});
  ASSERT_EQ(out.verdict, Verdict::InfeasibleClosure);
  ASSERT_TRUE(out.certificate.has_value());
  EXPECT_LE((out.certificate->normalized() - vec({-1, 0})).norm(), 1e-6);
  EXPECT_EQ(out.dual_attained, DualAttainment::No);
  EXPECT_FALSE(out.x.has_value());
}

TEST(SolveApproximate, SlackCoversTarget) {
  const Outcome out = solve_approximate(test::uniqueness_instance(1.5), SolverConfig{});
  ASSERT_EQ(out.verdict, Verdict::Feasible);
  EXPECT_LE(out.x->norm(), 1e-12);
  EXPECT_LE(out.y->norm(), 1e-12);
  EXPECT_NEAR(*out.pi, 0.0, 1e-12);
}

TEST(SolveExact, UniquenessExample) {
  const Outcome out = solve_exact(test::uniqueness_instance(), SolverConfig{});
  ASSERT_EQ(out.verdict, Verdict::Feasible);
  EXPECT_LE((*out.x - vec({1, 0})).norm(), 1e-6);
  EXPECT_EQ(out.dual_attained, DualAttainment::Yes);
  EXPECT_NEAR(*out.farkas_constant, 1.0, 1e-6);
}

TEST(SolveExact, TangentSecondOrderCone) {
  const Outcome out = solve_exact(test::tangent_soc_instance(), SolverConfig{});
  ASSERT_EQ(out.verdict, Verdict::Feasible);
  EXPECT_LE((*out.x - vec({0.5, 0, 0.5})).lpNorm<Eigen::Infinity>(), 1e-4);
  EXPECT_NE(out.dual_attained, DualAttainment::Yes);
  EXPECT_EQ(out.dual_status, SolveStatus::NonAttainedSuspected);
}

TEST(SolveExact, UnreachableTargetHasInfiniteConstant) {
  const Outcome out = solve_exact(orthant_instance(Matrix::Identity(2, 2), vec({-1, 0}), 0.0), SolverConfig{});
  ASSERT_EQ(out.verdict, Verdict::ExactInfeasibleEvidence);
  EXPECT_TRUE(std::isinf(*out.farkas_constant));
  EXPECT_FALSE(out.ratio_trace.empty());
}

TEST(Solve, DispatchesOnEpsilon) {
  EXPECT_EQ(solve(test::uniqueness_instance(0.0), SolverConfig{}).verdict, Verdict::Feasible);
  EXPECT_EQ(solve(orthant_instance(Matrix::Identity(2, 2), vec({-1, 0}), 0.0), SolverConfig{}).verdict,
            Verdict::ExactInfeasibleEvidence);
  EXPECT_EQ(solve(orthant_instance(Matrix::Identity(2, 2), vec({-1, 0}), 0.1), SolverConfig{}).verdict,
            Verdict::InfeasibleClosure);
}

TEST(SolvePdhg, AgreesWithDualRoute) {
  const Outcome a = solve_pdhg(test::uniqueness_instance(0.25), SolverConfig{});
  ASSERT_EQ(a.verdict, Verdict::Feasible);
  EXPECT_LE((*a.x - vec({0.75, 0})).norm(), 1e-5);
}

TEST(CertificateVerify, Examples) {
  const Instance inst = orthant_instance(Matrix::Identity(2, 2), vec({-1, 0}), 0.0);
  EXPECT_TRUE(certificate_verify(inst, vec({-1, 0}), kCertificateTol));
  EXPECT_TRUE(certificate_verify(inst, vec({-3, 0}), kCertificateTol));
  EXPECT_FALSE(certificate_verify(inst, vec({1, 0}), kCertificateTol));
  EXPECT_FALSE(certificate_verify(inst, vec({-1, 1}), kCertificateTol));
  EXPECT_THROW(certificate_verify(inst, Vector::Zero(2), kCertificateTol), std::invalid_argument);
}

TEST(CertificateVerify, SeparationAccountsForEpsilon) {
  const Instance tight = orthant_instance(Matrix::Identity(2, 2), vec({-1, 0}), 0.5);
  const Instance loose = orthant_instance(Matrix::Identity(2, 2), vec({-1, 0}), 1.5);
  EXPECT_TRUE(certificate_separates(tight, vec({-1, 0}), kCertificateTol));
  EXPECT_FALSE(certificate_separates(loose, vec({-1, 0}), kCertificateTol));
  EXPECT_TRUE(certificate_verify(loose, vec({-1, 0}), kCertificateTol));
}

TEST(FarkasConstant, Examples) {
  EXPECT_NEAR(farkas_constant(test::uniqueness_instance(), SolverConfig{}), 1.0, 1e-6);
  EXPECT_NEAR(farkas_constant(orthant_instance(Matrix::Identity(2, 2), vec({0.5, 0.5}), 0.0), SolverConfig{}),
              std::sqrt(0.5), 1e-6);
  EXPECT_EQ(farkas_constant(orthant_instance(Matrix::Identity(2, 2), Vector::Zero(2), 0.0), SolverConfig{}), 0.0);
  EXPECT_TRUE(std::isinf(
      farkas_constant(orthant_instance(Matrix::Identity(2, 2), vec({-1, 0}), 0.0), SolverConfig{})));
}

TEST(FarkasConstant, BoundsTheRatio) {
  // <b, y> <= C sigma(A^T y) for random y.
  std::mt19937_64 rng(4);
  const Instance inst = orthant_instance(mat({{1, 2, 0}, {0, 1, 1}}), vec({1, 1}), 0.0);
  const double c = farkas_constant(inst, SolverConfig{});
  for (int i = 0; i < 1000; ++i) {
    const Vector y = test::gaussian(rng, 2);
    EXPECT_LE(inst.b.dot(y), c * inst.generator.support_value(inst.A.adjoint_apply(y)) + 1e-9);
  }
}

TEST(FarkasConstant, ScalesLinearlyWithTarget) {
  const Instance a = orthant_instance(mat({{1, 2, 0}, {0, 1, 1}}), vec({1, 1}), 0.0);
  const Instance b = orthant_instance(mat({{1, 2, 0}, {0, 1, 1}}), vec({3, 3}), 0.0);
  EXPECT_NEAR(farkas_constant(b, SolverConfig{}), 3.0 * farkas_constant(a, SolverConfig{}), 1e-6);
}

TEST(LeastNormPseudoinverse, Examples) {
  const Vector x = least_norm_pseudoinverse(LinearMap(mat({{1, 1}})), vec({2}), Cone::orthant(2), SolverConfig{});
  EXPECT_LE((x - vec({1, 1})).norm(), 1e-6);

  const Vector b = vec({0.3, -2});
  EXPECT_LE((least_norm_pseudoinverse(LinearMap::identity(2), b, Cone::full_space(2), SolverConfig{}) - b).norm(),
            1e-6);
  EXPECT_LE((least_norm_pseudoinverse(LinearMap::identity(2), vec({1, 0}), Cone::orthant(2), SolverConfig{}) -
             vec({1, 0}))
                .norm(),
            1e-6);
}

TEST(LeastNormPseudoinverse, MatchesMoorePenroseOnFullSpace) {
  std::mt19937_64 rng(8);
  const Matrix a = test::gaussian(rng, 2, 4);
  const Vector b = test::gaussian(rng, 2);
  const Vector expected = a.completeOrthogonalDecomposition().pseudoInverse() * b;
  const Vector x = least_norm_pseudoinverse(LinearMap(a), b, Cone::full_space(4), SolverConfig{});
  EXPECT_LE((x - expected).norm(), 1e-6 * (1 + expected.norm()));
}

TEST(LeastNormPseudoinverse, Infeasible) {
  EXPECT_THROW(least_norm_pseudoinverse(LinearMap::identity(2), vec({-1, 0}), Cone::orthant(2), SolverConfig{}),
               InfeasibleError);
}

TEST(DiagnoseAttainment, UniquenessExample) {
  const AttainmentDiagnosis d =
      diagnose_attainment(LinearMap::identity(2), vec({1, 0}), Cone::orthant(2), vec({1, 0}), 1e-6);
  EXPECT_EQ(d.kind, AttainmentKind::AttainedPossible);
  ASSERT_TRUE(d.normal.has_value());
  EXPECT_GT(d.normal->dot(vec({1, 0})), 0.0);
}

TEST(DiagnoseAttainment, TangentSecondOrderCone) {
  const Instance inst = test::tangent_soc_instance();
  const AttainmentDiagnosis d =
      diagnose_attainment(inst.A, inst.b, inst.generator.cone(), vec({0.5, 0, 0.5}), 1e-6);
  EXPECT_EQ(d.kind, AttainmentKind::AllNormalsOrthogonal);
}

TEST(DiagnoseAttainment, FullRangeMapAttains) {
  // ran(A^T) is everything, so x* itself is a shared normal.
  const AttainmentDiagnosis d = diagnose_attainment(LinearMap(mat({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})),
                                                    vec({0.5, 0, 0.5}), Cone::second_order(3), vec({0.5, 0, 0.5}),
                                                    1e-6);
  EXPECT_EQ(d.kind, AttainmentKind::AttainedPossible);
}

TEST(DiagnoseAttainment, RejectsBadInput) {
  EXPECT_THROW(diagnose_attainment(LinearMap::identity(2), vec({1, 0}), Cone::orthant(2), vec({0, 1}), 1e-6),
               std::invalid_argument);
  EXPECT_THROW(diagnose_attainment(LinearMap::identity(2), vec({1, 0}), Cone::full_space(2), vec({1, 0}), 1e-6),
               UnsupportedError);
  EXPECT_THROW(diagnose_attainment(LinearMap::identity(2), vec({1, 0}), Cone::orthant(2), vec({1, 0}), 0.0),
               std::invalid_argument);
}

TEST(RelaxAndSolve, TargetOnGeneratorRay) {
  const Outcome out =
      relax_and_solve(LinearMap::identity(2), vec({2, 0}), {vec({1, 0}), vec({0, 1})}, 0.0, SolverConfig{});
  ASSERT_EQ(out.verdict, Verdict::Feasible);
  ASSERT_TRUE(out.in_original_cone.has_value());
  EXPECT_TRUE(*out.in_original_cone);
  EXPECT_LE((*out.x - vec({2, 0})).norm(), 1e-6);
}

TEST(RelaxAndSolve, SymmetricTieLeavesMembershipUnset) {
  const Outcome out =
      relax_and_solve(LinearMap::identity(2), vec({1, 1}), {vec({1, 0}), vec({0, 1})}, 0.0, SolverConfig{});
  ASSERT_EQ(out.verdict, Verdict::Feasible);
  EXPECT_FALSE(out.unique_recovery);
  EXPECT_FALSE(out.in_original_cone.has_value());
  EXPECT_FALSE(out.diagnostic.empty());
}

TEST(RelaxAndSolve, RedundantInteriorPoint) {
  // (1, 0) lies inside the hull of the other points; the solution still sits on a raw ray.
  const Outcome out = relax_and_solve(LinearMap::identity(2), vec({1, 0}),
                                      {vec({2, 0}), vec({1, 0}), vec({0, 2})}, 0.0, SolverConfig{});
  ASSERT_EQ(out.verdict, Verdict::Feasible);
  ASSERT_TRUE(out.in_original_cone.has_value());
  EXPECT_TRUE(*out.in_original_cone);
}

TEST(RelaxAndSolve, InfeasibleWithSlack) {
  const Outcome out =
      relax_and_solve(LinearMap::identity(2), vec({-1, 0}), {vec({1, 0}), vec({0, 1})}, 0.1, SolverConfig{});
  EXPECT_EQ(out.verdict, Verdict::InfeasibleClosure);
  EXPECT_FALSE(out.in_original_cone.has_value());
}

TEST(Outcome, ScalingCovariance) {
  // Scaling b and epsilon by s scales x and y by s and pi by s^2.
  const Instance a = orthant_instance(mat({{1, 2, 0}, {0, 1, 1}}), vec({1, 0.5}), 0.1);
  const Instance b = orthant_instance(mat({{1, 2, 0}, {0, 1, 1}}), vec({4, 2}), 0.4);
  const Outcome oa = solve(a, SolverConfig{}), ob = solve(b, SolverConfig{});
  ASSERT_EQ(oa.verdict, Verdict::Feasible);
  ASSERT_EQ(ob.verdict, Verdict::Feasible);
  EXPECT_LE((*ob.x - 4.0 * *oa.x).norm(), 1e-5);
  EXPECT_LE((*ob.y - 4.0 * *oa.y).norm(), 1e-5);
  EXPECT_NEAR(*ob.pi, 16.0 * *oa.pi, 1e-5);
}

TEST(Outcome, ExclusivityOnGeneratedInstances) {
  for (long id = 0; id < 30; ++id) {
    const cli::GeneratedInstance g = cli::bench_instance(5, id);
    const Outcome out = solve(g.instance, SolverConfig{});
    if (g.regime == cli::Regime::Infeasible) {
      EXPECT_NE(out.verdict, Verdict::Feasible) << "instance " << id;
    } else {
      EXPECT_EQ(out.verdict, Verdict::Feasible) << "instance " << id;
    }
  }
}

TEST(VerdictNames, Strings) {
  EXPECT_STREQ(to_string(Verdict::InfeasibleClosure), "InfeasibleClosure");
  EXPECT_STREQ(to_string(DualAttainment::Suspected), "Suspected");
  EXPECT_STREQ(to_string(AttainmentKind::AllNormalsOrthogonal), "AllNormalsOrthogonal");
}
