#pragma once

#include "conic/duality.hpp"

#include <cstdint>
#include <optional>
#include <random>

namespace conic::cli {

enum class Regime { Feasible, Boundary, Infeasible };
enum class ConeFamily { Orthant, SecondOrder };

const char* to_string(Regime regime);

struct GeneratedInstance {
  Instance instance;
  Regime regime;
  /// x in the cone with ||Ax - b|| <= epsilon (Feasible, Boundary).
  std::optional<Vector> planted_x;
  /// Unit y with sigma(A^T y) = 0 and <b, y> > epsilon (Infeasible).
  std::optional<Vector> planted_certificate;
};

/**
 * Random ball-cap instance with a known answer.
 *
 *  Feasible:   b = A x0 with x0 in the interior of the cone.
 *  Boundary:   A is bent so that A^T y0 = q for a boundary point q of the
 *              polar cone and b = A x0 with <x0, q> = 0, so b sits on the
 *              edge of A(P).
 *  Infeasible: same bending with q interior to the polar cone and
 *              <b, y0> = epsilon + delta, delta in [0.2, 1].
 */
GeneratedInstance generate_instance(std::mt19937_64& rng, Regime regime, ConeFamily family, Eigen::Index m,
                                    Eigen::Index n, double epsilon);

/// Deterministic instance `id` of a bench run: regime id % 3, epsilon
/// alternating 0 / 0.1, cone family and sizes drawn from seed and id.
GeneratedInstance bench_instance(std::uint64_t seed, long id);

}  // namespace conic::cli
