#pragma once

#include "conic/operators.hpp"

namespace conic {

struct NnlsResult {
  Vector coefficients;
  double residual_norm = 0.0;  ///< ||R c - x||
  double kkt_violation = 0.0;  ///< max over inactive j of (R^T (x - R c))_j, clamped at 0
  int iterations = 0;
  bool converged = false;
};

/**
 * Lawson-Hanson active set method for min ||R c - x|| subject to c >= 0.
 *
 * `tol` is the dual feasibility threshold on R^T(x - Rc), scaled internally
 * by (1 + ||x||) times the largest column norm.
 */
NnlsResult nnls(const Matrix& R, const Vector& x, int max_iter, double tol);

}  // namespace conic
