#pragma once

#include "conic/operators.hpp"

#include <utility>
#include <variant>
#include <vector>

namespace conic {

struct MoreauPair {
  Vector plus;   ///< projection onto the cone
  Vector minus;  ///< projection onto the polar cone
};

/**
 * A closed convex cone with exact Euclidean projection.
 *
 * Variants:
 *  - nonnegative orthant R^n_+
 *  - second-order cone {x : x_last >= 0, ||x_head|| <= alpha * x_last}
 *  - linear subspace spanned by a basis (orthonormalised on construction)
 *  - finitely generated cone {R c : c >= 0}
 *  - Cartesian product of the above
 *
 * Membership tests use absolute tolerances.
 */
class Cone {
 public:
  enum class Kind { NonnegativeOrthant, SecondOrder, Subspace, PolyhedralRays, Product };

  struct Orthant {
    Eigen::Index dim;
  };
  struct SecondOrder {
    Eigen::Index dim;
    double alpha;
  };
  struct Subspace {
    Matrix basis;  // orthonormal columns
  };
  struct Rays {
    Matrix rays;  // one ray per column
  };
  struct Product {
    std::vector<Cone> blocks;
  };

  static Cone orthant(Eigen::Index dim);
  static Cone second_order(Eigen::Index dim, double alpha = 1.0);
  /// Span of the given vectors; throws if they are linearly dependent.
  static Cone subspace(const std::vector<Vector>& basis);
  /// The whole space R^dim, modelled as a subspace cone.
  static Cone full_space(Eigen::Index dim);
  static Cone rays(const std::vector<Vector>& generators);
  static Cone product(std::vector<Cone> blocks);

  Kind kind() const noexcept;
  Eigen::Index dim() const noexcept { return dim_; }
  /// Aperture of a second-order cone; throws for other kinds.
  double alpha() const;
  const std::variant<Orthant, SecondOrder, Subspace, Rays, Product>& variant() const noexcept {
    return shape_;
  }

  Vector project(const Vector& x) const;
  /// Allocation-free for orthant, second-order and subspace cones.
  void project_to(const Eigen::Ref<const Vector>& x, Eigen::Ref<Vector> out) const;

  MoreauPair moreau_decompose(const Vector& x) const;
  bool contains(const Vector& x, double tol) const;
  bool polar_contains(const Vector& z, double tol) const;

  /// Iteration cap multiplier and KKT tolerance of the ray-cone projection.
  static constexpr int kRaysIterationsPerRay = 50;
  static constexpr double kRaysTolerance = 1e-10;

 private:
  Cone(std::variant<Orthant, SecondOrder, Subspace, Rays, Product> shape, Eigen::Index dim)
      : shape_(std::move(shape)), dim_(dim) {}

  std::variant<Orthant, SecondOrder, Subspace, Rays, Product> shape_;
  Eigen::Index dim_;
};

/// Closed-form projection of (head, last) onto {||head|| <= alpha * last}.
void project_second_order(double alpha, const Eigen::Ref<const Vector>& x, Eigen::Ref<Vector> out);

}  // namespace conic
