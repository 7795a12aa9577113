#pragma once

#include "conic/cones.hpp"

#include <variant>
#include <vector>

namespace conic {

/// A maximiser of <z, .> over a generator set.
struct SupportFace {
  double value = 0.0;  ///< support value sigma_K(z)
  Vector witness;      ///< some v in K with <z, v> = value
  bool singular = false;
};

struct ScaledSubgradient {
  Vector point;  ///< sigma_K(z) * witness
  bool unique = true;
};

/**
 * Bounded closed convex set K containing the origin; its generated cone is
 * cone(K).
 *
 *  - BallCap:   K = P ∩ closed unit ball, for a closed convex cone P
 *  - Polytope:  K = conv(points ∪ {0})
 *  - Box:       K = prod_i [0, upper_i]
 *
 * `tie_tol` is the singularity threshold, scaled by (1 + ||z||) when
 * deciding whether a support maximiser is unique.
 */
class GeneratorSet {
 public:
  enum class Kind { BallCap, Polytope, Box };

  struct BallCap {
    Cone cone;
  };
  struct Polytope {
    Matrix points;  // one point per column
  };
  struct Box {
    Vector upper;
  };

  static constexpr double kDefaultTieTol = 1e-9;

  static GeneratorSet ball_cap(Cone cone, double tie_tol = kDefaultTieTol);
  static GeneratorSet polytope(const std::vector<Vector>& points, double tie_tol = kDefaultTieTol);
  static GeneratorSet box(Vector upper, double tie_tol = kDefaultTieTol);

  Kind kind() const noexcept;
  Eigen::Index dim() const noexcept { return dim_; }
  double tie_tol() const noexcept { return tie_tol_; }
  const std::variant<BallCap, Polytope, Box>& variant() const noexcept { return shape_; }
  /// The cone of a BallCap generator; throws for other kinds.
  const Cone& cone() const;

  double support_value(const Vector& z) const;
  SupportFace support_face(const Vector& z) const;
  /// Gauge j_K(x); +infinity outside cone(K). Throws NumericalError if the
  /// polytope LP fails to converge.
  double gauge(const Vector& x) const;
  ScaledSubgradient scaled_subgradient(const Vector& z) const;
  bool in_polar(const Vector& z, double tol) const;

  /// Membership tolerance of the BallCap gauge (cone containment test).
  static constexpr double kGaugeConeTol = 1e-9;

 private:
  GeneratorSet(std::variant<BallCap, Polytope, Box> shape, Eigen::Index dim, double tie_tol)
      : shape_(std::move(shape)), dim_(dim), tie_tol_(tie_tol) {}

  std::variant<BallCap, Polytope, Box> shape_;
  Eigen::Index dim_;
  double tie_tol_;
};

struct ExtremalityReport {
  bool holds = true;
  std::vector<Vector> violating;    ///< extreme points of the hull missing from the input set
  std::vector<Vector> non_extreme;  ///< input points that are not extreme points of the hull
};

/**
 * Checks that every extreme point of conv(points ∪ {0}) is one of the input
 * points or the origin, flagging redundant inputs.
 */
ExtremalityReport extremality_check(const std::vector<Vector>& points);

/**
 * Same check when the relaxed set conv(hull_points ∪ {0}) is supplied
 * separately from the original generator list `points`.
 */
ExtremalityReport extremality_check(const std::vector<Vector>& points, const std::vector<Vector>& hull_points);

}  // namespace conic
