#include "conic/operators.hpp"

#include <cmath>

namespace conic {

void require_dim(Eigen::Index got, Eigen::Index expected, const char* what) {
  if (got != expected) {
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(expected) +
                         ", got " + std::to_string(got));
  }
}

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": non-finite component");
  }
}

double inner(const Vector& x, const Vector& y) {
  require_dim(y.size(), x.size(), "inner");
  return x.dot(y);
}

double norm(const Vector& x) { return x.norm(); }

LinearMap::LinearMap(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.cols() == 0) {
    throw std::invalid_argument("LinearMap: empty matrix");
  }
  if (!entries_.allFinite()) {
    throw std::invalid_argument("LinearMap: non-finite entry");
  }
}

LinearMap LinearMap::identity(Eigen::Index n) { return LinearMap(Matrix::Identity(n, n)); }

Vector LinearMap::apply(const Vector& x) const {
  require_dim(x.size(), cols(), "LinearMap::apply");
  return entries_ * x;
}

Vector LinearMap::adjoint_apply(const Vector& y) const {
  require_dim(y.size(), rows(), "LinearMap::adjoint_apply");
  return entries_.transpose() * y;
}

}  // namespace conic
