#pragma once

#include "conic/solvers.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace conic {

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnresolvedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Verdict { Feasible, InfeasibleClosure, ExactInfeasibleEvidence, Unresolved };
enum class DualAttainment { Yes, No, Suspected, Unknown };

const char* to_string(Verdict verdict);
const char* to_string(DualAttainment attained);

/// Residual threshold (relative to 1 + ||b||) for primal points recovered from an attained dual.
inline constexpr double kFeasibleTol = 1e-6;
/// Residual threshold for primal points produced by the primal-dual fallback
/// when the dual infimum is not attained.
inline constexpr double kWeakFeasibleTol = 1e-3;
/// Tolerance handed to certificate_verify for solver-produced certificates.
inline constexpr double kCertificateTol = 1e-8;

struct Outcome {
  Verdict verdict = Verdict::Unresolved;
  std::optional<Vector> x;
  std::optional<Vector> y;
  std::optional<Vector> certificate;
  std::optional<double> gap;
  std::optional<double> pi;           ///< optimal primal value 1/2 j_K(x)^2
  std::optional<double> lambda_star;  ///< j_K(x)
  std::optional<double> farkas_constant;
  DualAttainment dual_attained = DualAttainment::Unknown;
  bool unique_recovery = false;
  std::optional<bool> in_original_cone;
  SolveStatus dual_status = SolveStatus::MaxIter;
  long iterations = 0;
  std::vector<TraceRow> trace;
  std::vector<std::pair<long, double>> ratio_trace;
  std::string diagnostic;
};

/// epsilon > 0: dual solve, recovery, or an infeasibility certificate.
Outcome solve_approximate(const Instance& inst, const SolverConfig& cfg);
/// epsilon = 0: as above with the primal-dual fallback when the dual infimum is not attained.
Outcome solve_exact(const Instance& inst, const SolverConfig& cfg);
/// Dispatches on epsilon.
Outcome solve(const Instance& inst, const SolverConfig& cfg);
/// Primal-dual hybrid gradient as the primary route (ball caps only).
Outcome solve_pdhg(const Instance& inst, const SolverConfig& cfg);

/**
 * y certifies b ∉ closure(A cone(K)) when sigma_K(A^T y) <= tol ||y|| and
 * <b, y> > tol ||y|| ||b||. Throws std::invalid_argument for y = 0.
 */
bool certificate_verify(const Instance& inst, const Vector& y, double tol);

/// certificate_verify plus <b, y> > (epsilon + tol ||b||) ||y||, which
/// separates b from A cone(K) by more than epsilon.
bool certificate_separates(const Instance& inst, const Vector& y, double tol);

/// Best constant C in <b,y> <= C sigma_K(A^T y), i.e. sqrt(2 pi_0). +infinity
/// when b is not reachable; throws UnresolvedError when the solve is inconclusive.
double farkas_constant(const Instance& inst, const SolverConfig& cfg);

/// Least-norm x with Ax = b and x ∈ P. Throws InfeasibleError or UnresolvedError.
Vector least_norm_pseudoinverse(const LinearMap& A, const Vector& b, const Cone& P, const SolverConfig& cfg);

enum class AttainmentKind { AttainedPossible, AllNormalsOrthogonal, NoSharedNormal };

const char* to_string(AttainmentKind kind);

struct AttainmentDiagnosis {
  AttainmentKind kind = AttainmentKind::NoSharedNormal;
  /// Shared normal v ∈ ran(A^T) ∩ N(x*) with <v, x*> > tol (AttainedPossible),
  /// or a shared normal orthogonal to x* (AllNormalsOrthogonal).
  std::optional<Vector> normal;
};

/**
 * Looks for a common normal of A^{-1}(b) and lambda* (P ∩ B) at x*, i.e.
 * v ∈ ran(A^T) ∩ (cone{x*} + P° ∩ {x*}^⊥), and reports whether one pairs
 * positively with x*. Orthant and second-order cones only.
 */
AttainmentDiagnosis diagnose_attainment(const LinearMap& A, const Vector& b, const Cone& P, const Vector& x_star,
                                        double tol);

/**
 * Relaxes the nonconvex cone generated by `raw_points` to the polytope
 * conv(raw_points ∪ {0}), solves, and decides whether the solution lies in
 * the original cone (unique recovery and all extreme points listed).
 */
Outcome relax_and_solve(const LinearMap& A, const Vector& b, const std::vector<Vector>& raw_points, double epsilon,
                        const SolverConfig& cfg);

/// Angle threshold for matching a relaxed solution to a raw generator.
inline constexpr double kCollinearityAngle = 1e-8;

}  // namespace conic
