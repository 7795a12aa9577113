#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace conic {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when operand dimensions disagree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a computation cannot reach its stated accuracy. The residual
/// reached is carried along for reporting.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

void require_dim(Eigen::Index got, Eigen::Index expected, const char* what);

/// Throws std::invalid_argument if any entry is NaN or infinite.
void require_finite(const Vector& v, const char* what);

double inner(const Vector& x, const Vector& y);
double norm(const Vector& x);

/**
 * Dense linear map A : R^cols -> R^rows with its Euclidean adjoint.
 *
 * Entries are validated as finite on construction; the map is immutable
 * afterwards.
 */
class LinearMap {
 public:
  explicit LinearMap(Matrix entries);

  static LinearMap identity(Eigen::Index n);

  Eigen::Index rows() const noexcept { return entries_.rows(); }
  Eigen::Index cols() const noexcept { return entries_.cols(); }
  const Matrix& matrix() const noexcept { return entries_; }

  Vector apply(const Vector& x) const;
  Vector adjoint_apply(const Vector& y) const;

 private:
  Matrix entries_;
};

}  // namespace conic
