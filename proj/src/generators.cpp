#include "conic/generators.hpp"

#include "conic/oracle/simplex.hpp"

#include <cmath>
#include <limits>

namespace conic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_tie_tol(double tie_tol) {
  if (!(tie_tol >= 0.0) || !std::isfinite(tie_tol)) throw std::invalid_argument("tie_tol must be >= 0");
}

bool same_point(const Vector& a, const Vector& b) {
  return (a - b).norm() <= 1e-12 * (1.0 + std::max(a.norm(), b.norm()));
}

// v ∈ conv(others) decided by: sum mu_i w_i = v, sum mu_i = 1, mu >= 0.
bool in_hull_of(const Vector& v, const std::vector<Vector>& others) {
  if (others.empty()) return false;
  const Eigen::Index d = v.size();
  const auto k = static_cast<Eigen::Index>(others.size());
  oracle::LpProblem lp;
  lp.objective = Vector::Zero(k);
  lp.equality = Matrix::Zero(d + 1, k);
  lp.rhs = Vector::Zero(d + 1);
  for (Eigen::Index j = 0; j < k; ++j) {
    lp.equality.col(j).head(d) = others[static_cast<std::size_t>(j)];
    lp.equality(d, j) = 1.0;
  }
  lp.rhs.head(d) = v;
  lp.rhs(d) = 1.0;
  return oracle::simplex_solve(lp).status == oracle::LpStatus::Optimal;
}

std::vector<Vector> with_origin_deduplicated(const std::vector<Vector>& points) {
  std::vector<Vector> out;
  out.push_back(Vector::Zero(points.front().size()));
  for (const auto& p : points) {
    bool seen = false;
    for (const auto& q : out) seen = seen || same_point(p, q);
    if (!seen) out.push_back(p);
  }
  return out;
}

std::vector<Vector> extreme_points(const std::vector<Vector>& candidates) {
  std::vector<Vector> extremes;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::vector<Vector> others;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      if (j != i) others.push_back(candidates[j]);
    }
    if (!in_hull_of(candidates[i], others)) extremes.push_back(candidates[i]);
  }
  return extremes;
}

void require_points(const std::vector<Vector>& points, const char* what) {
  if (points.empty()) throw std::invalid_argument(std::string(what) + ": empty point list");
  for (const auto& p : points) {
    require_dim(p.size(), points.front().size(), what);
    require_finite(p, what);
  }
}

}  // namespace

GeneratorSet GeneratorSet::ball_cap(Cone cone, double tie_tol) {
  require_tie_tol(tie_tol);
  const Eigen::Index dim = cone.dim();
  return GeneratorSet(BallCap{std::move(cone)}, dim, tie_tol);
}

GeneratorSet GeneratorSet::polytope(const std::vector<Vector>& points, double tie_tol) {
  require_tie_tol(tie_tol);
  require_points(points, "polytope");
  const Eigen::Index dim = points.front().size();
  if (dim == 0) throw std::invalid_argument("polytope: zero-dimensional points");
  Matrix m(dim, static_cast<Eigen::Index>(points.size()));
  for (std::size_t j = 0; j < points.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = points[j];
  return GeneratorSet(Polytope{std::move(m)}, dim, tie_tol);
}

GeneratorSet GeneratorSet::box(Vector upper, double tie_tol) {
  require_tie_tol(tie_tol);
  if (upper.size() == 0) throw std::invalid_argument("box: empty upper bound");
  require_finite(upper, "box");
  if ((upper.array() < 0.0).any()) throw std::invalid_argument("box: upper bounds must be >= 0");
  const Eigen::Index dim = upper.size();
  return GeneratorSet(Box{std::move(upper)}, dim, tie_tol);
}

GeneratorSet::Kind GeneratorSet::kind() const noexcept {
  return std::visit(Overloaded{
                        [](const BallCap&) { return Kind::BallCap; },
                        [](const Polytope&) { return Kind::Polytope; },
                        [](const Box&) { return Kind::Box; },
                    },
                    shape_);
}

const Cone& GeneratorSet::cone() const {
  if (const auto* cap = std::get_if<BallCap>(&shape_)) return cap->cone;
  throw std::logic_error("cone: generator is not a ball cap");
}

double GeneratorSet::support_value(const Vector& z) const {
  require_dim(z.size(), dim_, "support_value");
  return std::visit(Overloaded{
                        [&](const BallCap& s) { return s.cone.project(z).norm(); },
                        [&](const Polytope& s) {
                          const double best = (s.points.transpose() * z).maxCoeff();
                          return std::max(0.0, best);
                        },
                        [&](const Box& s) { return s.upper.dot(z.cwiseMax(0.0)); },
                    },
                    shape_);
}

SupportFace GeneratorSet::support_face(const Vector& z) const {
  require_dim(z.size(), dim_, "support_face");
  const double threshold = tie_tol_ * (1.0 + z.norm());
  SupportFace face;
  std::visit(Overloaded{
                 [&](const BallCap& s) {
                   const Vector plus = s.cone.project(z);
                   face.value = plus.norm();
                   face.witness = face.value > 0.0 ? Vector(plus / face.value) : Vector::Zero(dim_);
                   face.singular = face.value <= threshold;
                 },
                 [&](const Polytope& s) {
                   const Vector scores = s.points.transpose() * z;
                   Eigen::Index best = 0;
                   const double top = scores.maxCoeff(&best);
                   if (top <= 0.0) {
                     face.value = 0.0;
                     face.witness = Vector::Zero(dim_);
                   } else {
                     face.value = top;
                     face.witness = s.points.col(best);
                   }
                   // The origin is always a candidate with score 0.
                   bool tie = face.value <= threshold && top > -threshold;
                   for (Eigen::Index j = 0; j < scores.size() && !tie; ++j) {
                     if (scores(j) >= face.value - threshold && !same_point(s.points.col(j), face.witness)) {
                       tie = true;
                     }
                   }
                   face.singular = tie;
                 },
                 [&](const Box& s) {
                   face.value = s.upper.dot(z.cwiseMax(0.0));
                   face.witness = Vector::Zero(dim_);
                   face.singular = false;
                   for (Eigen::Index i = 0; i < dim_; ++i) {
                     if (z(i) > 0.0) face.witness(i) = s.upper(i);
                     if (std::abs(z(i)) <= threshold && s.upper(i) > 0.0) face.singular = true;
                   }
                 },
             },
             shape_);
  return face;
}

double GeneratorSet::gauge(const Vector& x) const {
  require_dim(x.size(), dim_, "gauge");
  return std::visit(Overloaded{
                        [&](const BallCap& s) { return s.cone.contains(x, kGaugeConeTol) ? x.norm() : kInf; },
                        [&](const Polytope& s) {
                          if (x.norm() == 0.0) return 0.0;
                          oracle::LpProblem lp{Vector::Ones(s.points.cols()), s.points, x};
                          const oracle::LpResult res = oracle::simplex_solve(lp);
                          if (res.status == oracle::LpStatus::Optimal) return res.value;
                          if (res.status == oracle::LpStatus::Infeasible) return kInf;
                          throw NumericalError("gauge: unbounded gauge LP", 0.0);
                        },
                        [&](const Box& s) {
                          double g = 0.0;
                          for (Eigen::Index i = 0; i < dim_; ++i) {
                            const double xi = x(i);
                            if (xi < -kGaugeConeTol) return kInf;
                            if (xi <= 0.0) continue;
                            if (s.upper(i) == 0.0) {
                              if (xi > kGaugeConeTol) return kInf;
                              continue;
                            }
                            g = std::max(g, xi / s.upper(i));
                          }
                          return g;
                        },
                    },
                    shape_);
}

ScaledSubgradient GeneratorSet::scaled_subgradient(const Vector& z) const {
  const SupportFace face = support_face(z);
  if (face.value <= tie_tol_ * (1.0 + z.norm())) return {Vector::Zero(dim_), true};
  return {face.value * face.witness, !face.singular};
}

bool GeneratorSet::in_polar(const Vector& z, double tol) const {
  if (tol < 0.0) throw std::invalid_argument("in_polar: negative tolerance");
  return support_value(z) <= tol;
}

ExtremalityReport extremality_check(const std::vector<Vector>& points) { return extremality_check(points, points); }

ExtremalityReport extremality_check(const std::vector<Vector>& points, const std::vector<Vector>& hull_points) {
  require_points(points, "extremality_check");
  require_points(hull_points, "extremality_check");
  require_dim(hull_points.front().size(), points.front().size(), "extremality_check");

  const std::vector<Vector> extremes = extreme_points(with_origin_deduplicated(hull_points));
  ExtremalityReport report;
  const Vector origin = Vector::Zero(points.front().size());
  for (const auto& e : extremes) {
    bool listed = same_point(e, origin);
    for (const auto& p : points) listed = listed || same_point(e, p);
    if (!listed) report.violating.push_back(e);
  }
  for (const auto& p : points) {
    bool extreme = false;
    for (const auto& e : extremes) extreme = extreme || same_point(e, p);
    if (!extreme) report.non_extreme.push_back(p);
  }
  report.holds = report.violating.empty();
  return report;
}

}  // namespace conic
