#pragma once

#include "conic/operators.hpp"

#include <optional>

namespace conic::oracle {

/// min objective^T lambda  s.t.  equality * lambda = rhs,  lambda >= 0.
struct LpProblem {
  Vector objective;
  Matrix equality;
  Vector rhs;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Vector solution;  ///< set when Optimal
  Vector duals;     ///< equality multipliers w: equality^T w <= objective, rhs^T w = value
  double value = 0.0;
  int pivots = 0;
};

inline constexpr Eigen::Index kSimplexMaxVariables = 64;
inline constexpr Eigen::Index kSimplexMaxConstraints = 64;

/**
 * Dense two-phase tableau simplex with Bland's anti-cycling rule.
 *
 * Intended for the tiny programs that arise in gauge evaluation, face
 * recovery and hull membership. Throws std::invalid_argument when the
 * problem exceeds the size limits, and NumericalError when the final
 * equality residual exceeds 1e-9 (relative to 1 + ||rhs||).
 */
LpResult simplex_solve(const LpProblem& lp);

/**
 * Equality multipliers on the optimal dual face of a solved program that
 * leave the most slack (capped at 1) on the columns outside the primal
 * support. Throws like simplex_solve.
 */
std::optional<Vector> central_duals(const LpProblem& lp, const LpResult& solved);

}  // namespace conic::oracle
