#pragma once

#include "conic/duality.hpp"
#include "conic/oracle/simplex.hpp"

#include <vector>

namespace conic::oracle {

struct ReferenceConfig {
  long max_iter = 2'000'000;
  double tol = 1e-13;      ///< step length between sweeps
  double gap_tol = 1e-10;  ///< distance between the two projections
};

struct ReferenceResult {
  Vector x;
  double pi = 0.0;  // 1/2 ||x||^2
  long iterations = 0;
  bool converged = false;
};

/**
 * Least-norm point of P ∩ {x : ||Ax - b|| <= epsilon} by Dykstra's
 * alternating projections started at the origin. BallCap generators only.
 * The ellipsoidal set is projected in SVD coordinates with a bisection on
 * the multiplier. Throws std::invalid_argument when that set is empty.
 */
ReferenceResult primal_reference(const Instance& inst, const ReferenceConfig& cfg = {});

/// Projection onto {x : ||Ax - b|| <= epsilon} (affine when epsilon = 0).
class ResidualBallProjector {
 public:
  ResidualBallProjector(const Matrix& a, const Vector& b, double epsilon);
  Vector project(const Vector& x) const;

 private:
  Matrix v_;        // right singular vectors of the nonzero singular values
  Vector s_;        // nonzero singular values
  Vector c_;        // U^T b
  double outside_;  // squared part of b outside ran(A)
  double epsilon_;
};

/// max over a cubic grid of <z, x> - 1/2 gauge(K, x)^2, dim(K) <= 3, then
/// `zoom_levels` finer grids around the incumbent.
double conjugate_grid_check(const GeneratorSet& K, const Vector& z, double grid_radius, int grid_n,
                            int zoom_levels = 0);

inline constexpr std::size_t kVertexMaxPoints = 20;
inline constexpr Eigen::Index kVertexMaxDim = 4;

/// Extreme points of conv(points ∪ {0}), in input order with the origin last.
std::vector<Vector> vertex_enumerate(const std::vector<Vector>& points);

}  // namespace conic::oracle
