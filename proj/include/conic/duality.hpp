#pragma once

#include "conic/generators.hpp"

namespace conic {

/// Problem data: find x ∈ cone(K) with ||A x - b|| <= epsilon.
struct Instance {
  LinearMap A;
  Vector b;
  GeneratorSet generator;
  double epsilon = 0.0;

  Instance(LinearMap a, Vector target, GeneratorSet gen, double eps);
};

/// Band added to epsilon by the primal indicator.
inline constexpr double kPrimalFeasTol = 1e-8;

/// 1/2 j_K(x)^2 if ||Ax - b|| <= epsilon + kPrimalFeasTol, +infinity otherwise.
double primal_objective(const Instance& inst, const Vector& x);

/// J(y) = 1/2 sigma_K(A^T y)^2 - <b, y> + epsilon ||y||.
double dual_objective(const Instance& inst, const Vector& y);

/// An element of the subdifferential of J at y (zero element of the norm
/// term's subdifferential at y = 0).
Vector dual_subgradient(const Instance& inst, const Vector& y);

struct DualState {
  Vector y;
  double value = 0.0;
  Vector subgrad;
  double sigma = 0.0;
  bool unique_face = true;
};

DualState evaluate_dual(const Instance& inst, const Vector& y);

/// primal_objective(x) + dual_objective(y). Requires a finite primal value.
double duality_gap(const Instance& inst, const Vector& x, const Vector& y);

/**
 * First-order optimality system of the primal/dual pair:
 *  (a) x ∈ sigma_K(A^T y) ∂sigma_K(A^T y), checked either against the
 *      support witness or through the face equations
 *      j_K(x) <= sigma + tol and |<A^T y, x> - sigma^2| <= tol;
 *  (b) epsilon > 0: y = 0 with ||Ax - b|| <= epsilon, or ||Ax - b|| = epsilon
 *      with y a nonnegative multiple of (b - Ax);
 *      epsilon = 0: Ax = b (the condition on y is vacuous).
 */
bool check_saddle(const Instance& inst, const Vector& x, const Vector& y, double tol);

struct Recovery {
  Vector x;
  bool unique = true;
};

/**
 * Primal point attached to a dual point y through the recovery inclusion
 * x ∈ sigma(A^T y) ∂sigma(A^T y).
 *
 * For ball caps the inclusion is single valued: x = (A^T y)_+. For polytopes
 * and boxes the face exposed by A^T y (up to `face_tol`, scaled by
 * 1 + ||A^T y||) is searched for the point of least gauge meeting the affine
 * target b - epsilon y/||y||; `unique` reports whether that face, scaled by
 * sigma, is a single point. A single exposed point p is returned as the
 * shortest multiple t p with ||A t p - b|| <= epsilon when one exists, which
 * equals sigma p at a dual minimiser.
 */
Recovery recover_primal(const Instance& inst, const Vector& y, double face_tol);

}  // namespace conic
