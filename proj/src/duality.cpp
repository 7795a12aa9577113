#include "conic/duality.hpp"

#include "conic/oracle/simplex.hpp"

#include <cmath>
#include <limits>

namespace conic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vector affine_target(const Instance& inst, const Vector& y) {
  const double ny = y.norm();
  if (inst.epsilon > 0.0 && ny > 0.0) return inst.b - (inst.epsilon / ny) * y;
  return inst.b;
}

// Smallest t >= 0 with ||t a - b|| <= epsilon; the least-squares scale when the
// discriminant is slightly negative, so the caller's residual test decides.
double shortest_scale(const Vector& a, const Vector& b, double epsilon, double fallback) {
  const double aa = a.squaredNorm();
  if (aa == 0.0) return fallback;
  const double ab = a.dot(b);
  const double disc = ab * ab - aa * (b.squaredNorm() - epsilon * epsilon);
  return std::max(0.0, (ab - std::sqrt(std::max(disc, 0.0))) / aa);
}

// Face programs are tiny but can be badly scaled; a failed solve means no recovery from the face.
oracle::LpResult solve_face(const oracle::LpProblem& lp) {
  try {
    return oracle::simplex_solve(lp);
  } catch (const NumericalError&) {
    return {};
  }
}

Recovery recover_polytope(const Instance& inst, const Matrix& points, const Vector& z, double sigma,
                          double threshold, const Vector& target) {
  const Vector scores = points.transpose() * z;
  std::vector<Eigen::Index> face;
  for (Eigen::Index j = 0; j < scores.size(); ++j) {
    if (scores(j) < sigma - threshold) continue;
    bool duplicate = false;
    for (const auto k : face) {
      duplicate = duplicate || (points.col(j) - points.col(k)).norm() <= 1e-12 * (1.0 + points.col(k).norm());
    }
    if (!duplicate) face.push_back(j);
  }
  Eigen::Index best = 0;
  scores.maxCoeff(&best);
  if (face.size() <= 1) {
    const Vector p = points.col(best);
    return {shortest_scale(inst.A.apply(p), inst.b, inst.epsilon, sigma) * p, true};
  }

  const Matrix& a = inst.A.matrix();
  Matrix sub(points.rows(), static_cast<Eigen::Index>(face.size()));
  for (std::size_t k = 0; k < face.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = points.col(face[k]);
  oracle::LpProblem lp{Vector::Ones(sub.cols()), a * sub, target};
  const oracle::LpResult res = solve_face(lp);
  if (res.status != oracle::LpStatus::Optimal) return {sigma * points.col(best), false};
  return {sub * res.solution, false};
}

Recovery recover_box(const Instance& inst, const Vector& upper, const Vector& z, double sigma, double threshold,
                     const Vector& target) {
  const Eigen::Index n = upper.size();
  Vector x = Vector::Zero(n);
  std::vector<Eigen::Index> free;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (upper(i) > 0.0 && std::abs(z(i)) <= threshold) {
      free.push_back(i);
    } else if (z(i) > 0.0) {
      x(i) = sigma * upper(i);
    }
  }
  if (free.empty()) {
    const Vector dir = x / sigma;
    return {shortest_scale(inst.A.apply(dir), inst.b, inst.epsilon, sigma) * dir, true};
  }

  // Variables: free coordinates then their slacks against sigma * upper.
  const Matrix& a = inst.A.matrix();
  const auto f = static_cast<Eigen::Index>(free.size());
  const Eigen::Index m = a.rows();
  oracle::LpProblem lp;
  lp.objective = Vector::Zero(2 * f);
  lp.equality = Matrix::Zero(m + f, 2 * f);
  lp.rhs = Vector::Zero(m + f);
  lp.rhs.head(m) = target - a * x;
  for (Eigen::Index k = 0; k < f; ++k) {
    const Eigen::Index i = free[static_cast<std::size_t>(k)];
    lp.equality.col(k).head(m) = a.col(i);
    lp.equality(m + k, k) = 1.0;
    lp.equality(m + k, f + k) = 1.0;
    lp.rhs(m + k) = sigma * upper(i);
  }
  const oracle::LpResult res = solve_face(lp);
  if (res.status == oracle::LpStatus::Optimal) {
    for (Eigen::Index k = 0; k < f; ++k) x(free[static_cast<std::size_t>(k)]) = res.solution(k);
  }
  return {x, false};
}

}  // namespace

Instance::Instance(LinearMap a, Vector target, GeneratorSet gen, double eps)
    : A(std::move(a)), b(std::move(target)), generator(std::move(gen)), epsilon(eps) {
  require_dim(b.size(), A.rows(), "Instance b");
  require_dim(generator.dim(), A.cols(), "Instance generator");
  require_finite(b, "Instance b");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("Instance: epsilon must be >= 0");
}

double primal_objective(const Instance& inst, const Vector& x) {
  require_dim(x.size(), inst.A.cols(), "primal_objective");
  if ((inst.A.apply(x) - inst.b).norm() > inst.epsilon + kPrimalFeasTol) return kInf;
  const double g = inst.generator.gauge(x);
  if (!std::isfinite(g)) return kInf;
  return 0.5 * g * g;
}

double dual_objective(const Instance& inst, const Vector& y) {
  require_dim(y.size(), inst.A.rows(), "dual_objective");
  const double s = inst.generator.support_value(inst.A.adjoint_apply(y));
  return 0.5 * s * s - inst.b.dot(y) + inst.epsilon * y.norm();
}

Vector dual_subgradient(const Instance& inst, const Vector& y) {
  require_dim(y.size(), inst.A.rows(), "dual_subgradient");
  Vector g = inst.A.apply(inst.generator.scaled_subgradient(inst.A.adjoint_apply(y)).point) - inst.b;
  const double ny = y.norm();
  if (ny > 0.0) g += (inst.epsilon / ny) * y;
  return g;
}

DualState evaluate_dual(const Instance& inst, const Vector& y) {
  require_dim(y.size(), inst.A.rows(), "evaluate_dual");
  DualState state;
  state.y = y;
  const Vector z = inst.A.adjoint_apply(y);
  const ScaledSubgradient sub = inst.generator.scaled_subgradient(z);
  state.sigma = inst.generator.support_value(z);
  state.unique_face = sub.unique;
  state.value = 0.5 * state.sigma * state.sigma - inst.b.dot(y) + inst.epsilon * y.norm();
  state.subgrad = inst.A.apply(sub.point) - inst.b;
  const double ny = y.norm();
  if (ny > 0.0) state.subgrad += (inst.epsilon / ny) * y;
  return state;
}

double duality_gap(const Instance& inst, const Vector& x, const Vector& y) {
  const double p = primal_objective(inst, x);
  if (!std::isfinite(p)) throw std::domain_error("duality_gap: primal point is infeasible");
  return p + dual_objective(inst, y);
}

bool check_saddle(const Instance& inst, const Vector& x, const Vector& y, double tol) {
  require_dim(x.size(), inst.A.cols(), "check_saddle x");
  require_dim(y.size(), inst.A.rows(), "check_saddle y");
  const Vector z = inst.A.adjoint_apply(y);
  const double sigma = inst.generator.support_value(z);

  bool recovery_ok = (x - inst.generator.scaled_subgradient(z).point).norm() <= tol;
  if (!recovery_ok) {
    const double g = inst.generator.gauge(x);
    recovery_ok = std::isfinite(g) && g <= sigma + tol && std::abs(z.dot(x) - sigma * sigma) <= tol;
  }
  if (!recovery_ok) return false;

  const Vector r = inst.b - inst.A.apply(x);
  const double nr = r.norm();
  if (inst.epsilon == 0.0) return nr <= tol;
  const double ny = y.norm();
  if (ny <= tol) return nr <= inst.epsilon + tol;
  if (std::abs(nr - inst.epsilon) > tol) return false;
  if (nr == 0.0) return true;
  return (y / ny - r / nr).norm() <= tol;
}

Recovery recover_primal(const Instance& inst, const Vector& y, double face_tol) {
  require_dim(y.size(), inst.A.rows(), "recover_primal");
  const Vector z = inst.A.adjoint_apply(y);
  const GeneratorSet& gen = inst.generator;
  if (gen.kind() == GeneratorSet::Kind::BallCap) return {gen.cone().project(z), true};

  const double sigma = gen.support_value(z);
  if (sigma <= gen.tie_tol() * (1.0 + z.norm())) return {Vector::Zero(gen.dim()), true};
  const double threshold = std::max(face_tol, gen.tie_tol()) * (1.0 + z.norm());
  const Vector target = affine_target(inst, y);
  if (const auto* poly = std::get_if<GeneratorSet::Polytope>(&gen.variant())) {
    return recover_polytope(inst, poly->points, z, sigma, threshold, target);
  }
  const auto& box = std::get<GeneratorSet::Box>(gen.variant());
  return recover_box(inst, box.upper, z, sigma, threshold, target);
}

}  // namespace conic
