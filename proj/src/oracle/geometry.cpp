#include "conic/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace conic::oracle {

double conjugate_grid_check(const GeneratorSet& K, const Vector& z, double grid_radius, int grid_n, int zoom_levels) {
  const Eigen::Index d = K.dim();
  require_dim(z.size(), d, "conjugate_grid_check z");
  if (d < 1 || d > 3) throw std::invalid_argument("conjugate_grid_check: dimension must be 1, 2 or 3");
  if (grid_n < 2 || !(grid_radius > 0.0) || zoom_levels < 0) {
    throw std::invalid_argument("conjugate_grid_check: bad grid");
  }

  long total = 1;
  for (Eigen::Index i = 0; i < d; ++i) total *= grid_n;

  double best = -std::numeric_limits<double>::infinity();
  Vector center = Vector::Zero(d), arg = Vector::Zero(d), x(d);
  double radius = grid_radius;
  // The objective is concave, so each level re-grids a box of two cells around the incumbent.
  for (int level = 0; level <= zoom_levels; ++level) {
    const double h = 2.0 * radius / (grid_n - 1);
    for (long flat = 0; flat < total; ++flat) {
      long rest = flat;
      for (Eigen::Index i = 0; i < d; ++i) {
        x(i) = center(i) - radius + h * static_cast<double>(rest % grid_n);
        rest /= grid_n;
      }
      const double linear = z.dot(x);
      if (linear <= best) continue;  // the quadratic term is never positive
      const double j = K.gauge(x);
      if (!std::isfinite(j)) continue;
      const double value = linear - 0.5 * j * j;
      if (value > best) {
        best = value;
        arg = x;
      }
    }
    center = arg;
    radius = 2.0 * h;
  }
  return best;
}

namespace {

// v is extreme in conv(others ∪ {v}) iff some c has <c, w - v> <= -1 for every other w.
bool strictly_separable(const Vector& v, const std::vector<Vector>& others) {
  if (others.empty()) return true;
  const Eigen::Index d = v.size();
  const auto m = static_cast<Eigen::Index>(others.size());
  LpProblem lp;
  lp.objective = Vector::Zero(2 * d + m);
  lp.equality = Matrix::Zero(m, 2 * d + m);
  lp.rhs = Vector::Constant(m, -1.0);
  for (Eigen::Index r = 0; r < m; ++r) {
    const Vector diff = others[static_cast<std::size_t>(r)] - v;
    lp.equality.block(r, 0, 1, d) = diff.transpose();
    lp.equality.block(r, d, 1, d) = -diff.transpose();
    lp.equality(r, 2 * d + r) = 1.0;
  }
  return simplex_solve(lp).status == LpStatus::Optimal;
}

}  // namespace

std::vector<Vector> vertex_enumerate(const std::vector<Vector>& points) {
  if (points.size() > kVertexMaxPoints) throw std::invalid_argument("vertex_enumerate: at most 20 points");
  if (points.empty()) return {};
  const Eigen::Index d = points.front().size();
  if (d < 1 || d > kVertexMaxDim) throw std::invalid_argument("vertex_enumerate: dimension must be 1..4");

  std::vector<Vector> candidates;
  for (const auto& p : points) {
    require_dim(p.size(), d, "vertex_enumerate point");
    require_finite(p, "vertex_enumerate point");
    bool seen = p.isZero(0.0);
    for (const auto& c : candidates) seen = seen || c == p;
    if (!seen) candidates.push_back(p);
  }
  candidates.push_back(Vector::Zero(d));

  std::vector<Vector> extreme;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::vector<Vector> others;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      if (j != i) others.push_back(candidates[j]);
    }
    if (strictly_separable(candidates[i], others)) extreme.push_back(candidates[i]);
  }
  return extreme;
}

}  // namespace conic::oracle
