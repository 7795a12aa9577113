#include "conic/solvers.hpp"

#include "conic/nnls.hpp"
#include "conic/oracle/simplex.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <random>

namespace conic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kStallTolerance = 1e-8;
constexpr long kRayCheckStride = 16;
constexpr double kFlatSlope = 1e-3;

// min-norm element of g0 + epsilon * unit ball (subdifferential at y = 0).
void shrink_at_origin(Vector& g, double epsilon) {
  const double gn = g.norm();
  if (gn <= epsilon) {
    g.setZero();
  } else {
    g *= 1.0 - epsilon / gn;
  }
}

// Running bookkeeping shared by both dual methods.
class DualMonitor {
 public:
  DualMonitor(const Instance& inst, const SolverConfig& cfg) : inst_(inst), cfg_(cfg) {}

  void observe(long k, const Vector& y, double value, double subgrad_norm) {
    const double ny = y.norm();
    if (value < best_ || best_y_.size() == 0) {
      best_ = value;
      best_y_ = y;
    }
    if (cfg_.trace_stride > 0 && k % cfg_.trace_stride == 0) trace_.push_back({k, value, ny, subgrad_norm});
    if (k % kRayCheckStride == 0) {
      window_.push_back({ny, best_});
      if (window_.size() > static_cast<std::size_t>(cfg_.stall_window) + 1) window_.pop_front();
    }
    if (k > 0 && (k & (k - 1)) == 0) {
      const double sigma = inst_.generator.support_value(inst_.A.adjoint_apply(y));
      ratio_trace_.emplace_back(k, sigma > 0.0 ? inst_.b.dot(y) / sigma : kInf);
    }
    if (k % kRayCheckStride == 0) {
      value_checkpoint_prev_ = value_checkpoint_;
      value_checkpoint_ = value;
    }
  }

  // A point found off the iterate sequence.
  void offer(const Vector& y, double value) {
    if (value < best_) {
      best_ = value;
      best_y_ = y;
    }
  }

  // Stalled best value along a growing dual trajectory, sampled every
  // kRayCheckStride iterations.
  bool non_attainment_suspected() const {
    if (inst_.epsilon > 0.0 || window_.size() <= static_cast<std::size_t>(cfg_.stall_window)) return false;
    if (window_.back().norm <= cfg_.nonattain_norm) return false;
    for (std::size_t i = 1; i < window_.size(); ++i) {
      if (!(window_[i].norm > window_[i - 1].norm)) return false;
    }
    return window_.front().best - window_.back().best <= kStallTolerance;
  }

  // At the end of the budget: the dual keeps growing past nonattain_norm
  // while its best value stays bounded, J >= -kFlatSlope (1 + ||b||) ||y||.
  bool flat_growth(const Vector& y) const {
    if (inst_.epsilon > 0.0 || window_.size() <= static_cast<std::size_t>(cfg_.stall_window)) return false;
    const double ny = y.norm();
    return ny > cfg_.nonattain_norm && window_.back().norm > window_.front().norm &&
           best_ >= -kFlatSlope * (1.0 + inst_.b.norm()) * ny;
  }

  bool decreasing() const { return value_checkpoint_ < value_checkpoint_prev_; }

  /// Accepts d when it certifies unboundedness of J along its ray.
  bool accept_ray(const Vector& d_raw, Vector& out) const {
    const double nd = d_raw.norm();
    if (!(nd > 0.0) || !std::isfinite(nd)) return false;
    const Vector d = d_raw / nd;
    const double sigma = inst_.generator.support_value(inst_.A.adjoint_apply(d));
    const double lift = inst_.b.dot(d) - inst_.epsilon;
    if (sigma <= cfg_.ray_tol && lift > cfg_.ray_margin * inst_.b.norm()) {
      out = d;
      return true;
    }
    return false;
  }

  void finish(SolveReport& report, SolveStatus status, long iterations, const Vector& last_y, double last_value,
              double last_grad) {
    if (cfg_.trace_stride > 0 && (trace_.empty() || trace_.back().iter != iterations)) {
      trace_.push_back({iterations, last_value, last_y.norm(), last_grad});
    }
    if (status == SolveStatus::MaxIter && flat_growth(last_y)) status = SolveStatus::NonAttainedSuspected;
    report.status = status;
    report.iterations = iterations;
    report.best_value = best_;
    report.y_final = best_y_;
    report.trace = std::move(trace_);
    report.ratio_trace = std::move(ratio_trace_);
  }

 private:
  struct WindowEntry {
    double norm;
    double best;
  };
  const Instance& inst_;
  const SolverConfig& cfg_;
  double best_ = kInf;
  Vector best_y_;
  std::vector<TraceRow> trace_;
  std::vector<std::pair<long, double>> ratio_trace_;
  std::deque<WindowEntry> window_;
  double value_checkpoint_ = kInf;
  double value_checkpoint_prev_ = kInf;
};

Vector initial_point(const Instance& inst, const SolverConfig& cfg) {
  if (cfg.y0) {
    require_dim(cfg.y0->size(), inst.A.rows(), "SolverConfig::y0");
    return *cfg.y0;
  }
  return Vector::Zero(inst.A.rows());
}

// Checks the divergence tests; returns true when the solve must stop.
bool divergence_verdict(const DualMonitor& mon, const SolverConfig& cfg, long k, const Vector& y, double value,
                        const Vector& residual, const Vector& grad, SolveReport& report, SolveStatus& status) {
  const double ny = y.norm();
  const bool diverged = value < cfg.diverge_obj || ny > cfg.diverge_norm;
  if (!diverged && (k % kRayCheckStride != 0 || ny <= 1.0)) return false;
  if (diverged || mon.decreasing()) {
    Vector ray;
    if (mon.accept_ray(residual, ray) || mon.accept_ray(-grad, ray) || mon.accept_ray(y, ray)) {
      report.ray = ray;
      status = SolveStatus::UnboundedBelow;
      return true;
    }
  }
  if (diverged) {
    status = SolveStatus::MaxIter;
    return true;
  }
  return false;
}

SolveReport minimize_smooth(const Instance& inst, const SolverConfig& cfg) {
  const Matrix& a = inst.A.matrix();
  const Vector& b = inst.b;
  const Cone& cone = inst.generator.cone();
  const double eps = inst.epsilon;
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();

  const double lipschitz = std::pow(1.02 * std::max(estimate_operator_norm(inst.A), 1e-12), 2);
  const double step = cfg.step0 / lipschitz;

  Vector y = initial_point(inst, cfg);
  Vector y_new(m), w(m), grad(m), g(m), residual(m);
  Vector zt(n), p(n);

  // Value and min-norm subgradient at yy; residual = b - A (A^T yy)_+.
  auto evaluate = [&](const Vector& yy, Vector& gmin) {
    zt.noalias() = a.transpose() * yy;
    cone.project_to(zt, p);
    const double ny = yy.norm();
    gmin.noalias() = a * p;
    gmin -= b;
    residual = -gmin;
    const double value = 0.5 * p.squaredNorm() - b.dot(yy) + eps * ny;
    if (ny > 0.0) {
      gmin += (eps / ny) * yy;
    } else {
      shrink_at_origin(gmin, eps);
    }
    return value;
  };

  SolveReport report;
  DualMonitor mon(inst, cfg);
  double value = evaluate(y, g);
  double gnorm = g.norm();
  mon.observe(0, y, value, gnorm);
  if (gnorm <= cfg.grad_tol) {
    mon.finish(report, SolveStatus::Converged, 0, y, value, gnorm);
    return report;
  }

  w = y;
  double t = 1.0;
  SolveStatus status = SolveStatus::MaxIter;
  long k = 1;
  for (; k <= cfg.max_iter; ++k) {
    zt.noalias() = a.transpose() * w;
    cone.project_to(zt, p);
    grad.noalias() = a * p;
    grad -= b;
    y_new = w - step * grad;
    const double nv = y_new.norm();
    if (eps > 0.0) y_new *= nv > 0.0 ? std::max(0.0, 1.0 - step * eps / nv) : 0.0;

    const double value_new = evaluate(y_new, g);
    gnorm = g.norm();
    if (value_new > value) t = 1.0;  // function-value restart
    const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    w = y_new + ((t - 1.0) / t_new) * (y_new - y);
    t = t_new;
    y.swap(y_new);
    value = value_new;
    mon.observe(k, y, value, gnorm);

    if (gnorm <= cfg.grad_tol) {
      status = SolveStatus::Converged;
      break;
    }
    if (divergence_verdict(mon, cfg, k, y, value, residual, g, report, status)) break;
    if (mon.non_attainment_suspected()) {
      status = SolveStatus::NonAttainedSuspected;
      break;
    }
  }
  mon.finish(report, status, std::min(k, cfg.max_iter), y, value, gnorm);
  return report;
}

// Least-gauge program min t s.t. A x = b - epsilon y/||y||, x in t K, as an LP.
// Its multipliers w satisfy sigma(A^T w) <= 1 and <target, w> = t, so t w is a
// dual point with J = -t^2 / 2 once the direction of y is right.
std::optional<Vector> lp_dual_point(const Instance& inst, const Vector& y) {
  const Matrix& a = inst.A.matrix();
  const Eigen::Index m = a.rows(), n = a.cols();
  const double ny = y.norm();
  const Vector target = inst.epsilon > 0.0 && ny > 0.0 ? Vector(inst.b - (inst.epsilon / ny) * y) : inst.b;
  oracle::LpProblem lp;
  if (const auto* poly = std::get_if<GeneratorSet::Polytope>(&inst.generator.variant())) {
    lp.equality = a * poly->points;
    lp.objective = Vector::Ones(poly->points.cols());
    lp.rhs = target;
  } else {
    const Vector& upper = std::get<GeneratorSet::Box>(inst.generator.variant()).upper;
    // Variables x, slack s, t: A x = target, x + s - t u = 0.
    lp.equality = Matrix::Zero(m + n, 2 * n + 1);
    lp.equality.topLeftCorner(m, n) = a;
    lp.equality.bottomLeftCorner(n, n).setIdentity();
    lp.equality.block(m, n, n, n).setIdentity();
    lp.equality.bottomRightCorner(n, 1) = -upper;
    lp.objective = Vector::Zero(2 * n + 1);
    lp.objective(2 * n) = 1.0;
    lp.rhs = Vector::Zero(m + n);
    lp.rhs.head(m) = target;
  }
  try {
    const oracle::LpResult res = oracle::simplex_solve(lp);
    if (res.status != oracle::LpStatus::Optimal) return std::nullopt;
    // A vertex of the dual face tends to expose ties that an interior point avoids.
    const auto w = oracle::central_duals(lp, res);
    return Vector(res.value * (w ? *w : res.duals).head(m));
  } catch (const std::invalid_argument&) {
    return std::nullopt;  // beyond the simplex size limits
  } catch (const NumericalError&) {
    return std::nullopt;
  }
}

// b minus its projection onto A cone(K) for polytopes and boxes; it lies in
// the polar of A cone(K), so it is a ray of J once longer than epsilon.
std::optional<Vector> polyhedral_ray(const Instance& inst) {
  Matrix g;
  if (const auto* poly = std::get_if<GeneratorSet::Polytope>(&inst.generator.variant())) {
    g = inst.A.matrix() * poly->points;
  } else {
    g = inst.A.matrix() * std::get<GeneratorSet::Box>(inst.generator.variant()).upper.asDiagonal();
  }
  if (g.cols() == 0) return std::nullopt;
  const NnlsResult fit = nnls(g, inst.b, 100 * static_cast<int>(g.cols()) + 100, 1e-12);
  if (!fit.converged || fit.residual_norm <= inst.epsilon) return std::nullopt;
  return Vector(inst.b - g * fit.coefficients);
}

SolveReport minimize_subgradient(const Instance& inst, const SolverConfig& cfg) {
  const GeneratorSet& gen = inst.generator;
  const double eps = inst.epsilon;
  Vector y = initial_point(inst, cfg);

  struct Eval {
    double value;
    Vector g;
    Vector residual;
    bool smooth;
  };
  auto evaluate = [&](const Vector& yy) {
    const Vector z = inst.A.adjoint_apply(yy);
    const SupportFace face = gen.support_face(z);
    const bool zero = face.value <= gen.tie_tol() * (1.0 + z.norm());
    Eval e;
    e.g = inst.A.apply(zero ? Vector(Vector::Zero(gen.dim())) : Vector(face.value * face.witness)) - inst.b;
    e.residual = -e.g;
    const double ny = yy.norm();
    e.value = 0.5 * face.value * face.value - inst.b.dot(yy) + eps * ny;
    if (ny > 0.0) {
      e.g += (eps / ny) * yy;
    } else {
      shrink_at_origin(e.g, eps);
    }
    e.smooth = !face.singular || zero;
    return e;
  };

  const StepSchedule schedule =
      cfg.schedule == StepSchedule::InvSqrt ? StepSchedule::InvSqrt : StepSchedule::PolyakEstimate;

  SolveReport report;
  DualMonitor mon(inst, cfg);
  double lower_bound = -kInf;
  double best = kInf;
  Vector best_y = y;
  SolveStatus status = SolveStatus::MaxIter;
  Eval e = evaluate(y);
  if (const auto d = polyhedral_ray(inst)) {
    Vector ray;
    if (mon.accept_ray(*d, ray)) {
      mon.observe(0, y, e.value, e.g.norm());
      report.ray = ray;
      mon.finish(report, SolveStatus::UnboundedBelow, 0, y, e.value, e.g.norm());
      return report;
    }
  }
  long k = 0;
  for (;; ++k) {
    double gnorm = e.g.norm();
    mon.observe(k, y, e.value, gnorm);
    if (e.value < best) {
      best = e.value;
      best_y = y;
    }
    if (e.smooth && gnorm <= cfg.grad_tol) {
      status = SolveStatus::Converged;
      break;
    }
    if (k % cfg.recovery_stride == 0) {
      if (auto cand = lp_dual_point(inst, best_y)) {
        const double sig = gen.support_value(inst.A.adjoint_apply(*cand));
        const double nc = cand->norm();
        if (sig > 0.0 && nc > 0.0) {
          // Best point on the ray through the candidate; exact when epsilon = 0.
          const double lift = inst.b.dot(*cand) / nc - eps;
          *cand *= std::max(lift, 0.0) * nc / (sig * sig);
        }
        Eval ce = evaluate(*cand);
        if (ce.value < best) {
          mon.offer(*cand, ce.value);
          best = ce.value;
          best_y = y = *cand;
          e = std::move(ce);
          gnorm = e.g.norm();
        }
      }
      double primal = primal_objective(inst, recover_primal(inst, best_y, cfg.face_tol).x);
      // Off the exposed face, any generator combination meeting the target still bounds pi.
      if (!std::isfinite(primal)) primal = primal_objective(inst, recover_primal(inst, best_y, kInf).x);
      if (std::isfinite(primal)) {
        lower_bound = std::max(lower_bound, -primal);
        if (primal + best <= cfg.grad_tol * (1.0 + std::abs(best))) {
          status = SolveStatus::Converged;
          break;
        }
      }
    }
    if (divergence_verdict(mon, cfg, k, y, e.value, e.residual, e.g, report, status)) break;
    if (mon.non_attainment_suspected()) {
      status = SolveStatus::NonAttainedSuspected;
      break;
    }
    if (k >= cfg.max_iter) break;
    if (gnorm == 0.0) {
      // Zero subgradient at a kink: the point is optimal.
      status = SolveStatus::Converged;
      break;
    }

    double s = 0.0;
    if (schedule == StepSchedule::InvSqrt) {
      s = cfg.step0 / std::sqrt(static_cast<double>(k + 1)) / gnorm;
    } else {
      const double guess = best - cfg.step0 * (1.0 + std::abs(best)) / std::sqrt(static_cast<double>(k + 1));
      const double level = std::max(lower_bound, guess);
      s = std::max(e.value - level, 0.0) / (gnorm * gnorm);
      // The level can sit far below the optimum; keep the move within the current scale.
      s = std::min(s, cfg.step0 * (1.0 + y.norm()) / gnorm);
    }
    y -= s * e.g;
    e = evaluate(y);
  }
  mon.finish(report, status, k, y, e.value, e.g.norm());
  return report;
}

double shrink_factor(double norm, double amount) { return norm > 0.0 ? std::max(0.0, 1.0 - amount / norm) : 0.0; }

}  // namespace

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged:
      return "Converged";
    case SolveStatus::UnboundedBelow:
      return "UnboundedBelow";
    case SolveStatus::NonAttainedSuspected:
      return "NonAttainedSuspected";
    case SolveStatus::MaxIter:
      return "MaxIter";
  }
  return "?";
}

void SolverConfig::validate(const LinearMap& A) const {
  if (max_iter <= 0 || pdhg_max_iter <= 0) throw std::invalid_argument("SolverConfig: iteration caps must be positive");
  if (!(step0 > 0.0)) throw std::invalid_argument("SolverConfig: step0 must be positive");
  if (!(grad_tol > 0.0)) throw std::invalid_argument("SolverConfig: grad_tol must be positive");
  if (!(diverge_norm > 0.0)) throw std::invalid_argument("SolverConfig: diverge_norm must be positive");
  if (stall_window <= 0) throw std::invalid_argument("SolverConfig: stall_window must be positive");
  if (recovery_stride <= 0) throw std::invalid_argument("SolverConfig: recovery_stride must be positive");
  if (pdhg_tau < 0.0 || pdhg_sigma < 0.0) throw std::invalid_argument("SolverConfig: negative PDHG step");
  if (trace_stride < 0) throw std::invalid_argument("SolverConfig: negative trace stride");
  if (pdhg_tau > 0.0 || pdhg_sigma > 0.0) {
    const double op = estimate_operator_norm(A);
    const double tau = pdhg_tau > 0.0 ? pdhg_tau : 1.0 / op;
    const double sigma = pdhg_sigma > 0.0 ? pdhg_sigma : 1.0 / op;
    if (tau * sigma * op * op > 1.0 + 1e-12) {
      throw std::invalid_argument("SolverConfig: PDHG steps violate tau * sigma * ||A||^2 <= 1");
    }
  }
}

SolveReport minimize_dual(const Instance& inst, const SolverConfig& cfg) {
  cfg.validate(inst.A);
  const bool ball_cap = inst.generator.kind() == GeneratorSet::Kind::BallCap;
  if (cfg.schedule == StepSchedule::ProximalGradient && !ball_cap) {
    throw UnsupportedError("minimize_dual: proximal gradient needs a ball-cap generator");
  }
  const bool smooth = ball_cap && (cfg.schedule == StepSchedule::Auto || cfg.schedule == StepSchedule::ProximalGradient);
  return smooth ? minimize_smooth(inst, cfg) : minimize_subgradient(inst, cfg);
}

PdhgResult pdhg_solve(const Instance& inst, const SolverConfig& cfg) {
  if (inst.generator.kind() != GeneratorSet::Kind::BallCap) {
    throw UnsupportedError("pdhg_solve: only ball-cap generators have a closed-form primal proximal map");
  }
  cfg.validate(inst.A);
  const Matrix& a = inst.A.matrix();
  const Vector& b = inst.b;
  const Cone& cone = inst.generator.cone();
  const double eps = inst.epsilon;

  // Power iteration approaches ||A|| from below; the margin keeps the step
  // condition strict.
  const double op = 1.01 * std::max(estimate_operator_norm(inst.A), 1e-12);
  double tau = cfg.pdhg_tau > 0.0 ? cfg.pdhg_tau : 1.0 / op;
  double sigma = cfg.pdhg_sigma > 0.0 ? cfg.pdhg_sigma : 1.0 / op;

  Vector x = Vector::Zero(a.cols());
  Vector x_prev(a.cols()), x_bar = x, w(a.cols());
  Vector z = cfg.y0 ? Vector(-*cfg.y0) : Vector(Vector::Zero(a.rows()));
  Vector v(a.rows());

  PdhgResult out;
  SolveReport& report = out.report;
  report.status = SolveStatus::MaxIter;
  double best = kInf;
  constexpr long kCheckStride = 64;

  long k = 1;
  for (; k <= cfg.pdhg_max_iter; ++k) {
    v.noalias() = a * x_bar;
    v -= b;
    v = z + sigma * v;
    z = v * (eps > 0.0 ? shrink_factor(v.norm(), sigma * eps) : 1.0);

    x_prev = x;
    w.noalias() = a.transpose() * z;
    w = x - tau * w;
    cone.project_to(w, x);
    x /= 1.0 + tau;

    const double theta = 1.0 / std::sqrt(1.0 + 2.0 * tau);
    tau *= theta;
    sigma /= theta;
    x_bar = x + theta * (x - x_prev);

    const bool record = cfg.trace_stride > 0 && k % cfg.trace_stride == 0;
    if (k % kCheckStride == 0 || record || k == cfg.pdhg_max_iter) {
      const Vector y = -z;
      const double dual = dual_objective(inst, y);
      const double primal = 0.5 * x.squaredNorm();
      const double residual = (a * x - b).norm();
      if (dual < best) {
        best = dual;
        report.y_final = y;
      }
      if (record) report.trace.push_back({k, dual, y.norm(), residual});
      if (residual <= eps + cfg.grad_tol * (1.0 + b.norm()) && primal + dual <= cfg.grad_tol * (1.0 + primal)) {
        report.status = SolveStatus::Converged;
        break;
      }
    }
  }
  report.iterations = std::min(k, cfg.pdhg_max_iter);
  report.best_value = best;
  out.x = std::move(x);
  out.y = -z;
  if (report.y_final.size() == 0) report.y_final = out.y;
  return out;
}

double estimate_operator_norm(const LinearMap& A) {
  const Matrix& a = A.matrix();
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> gauss;
  Vector v(a.cols());
  for (auto& vi : v) vi = gauss(rng);
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < 200; ++it) {
    Vector u = a.transpose() * (a * v);
    const double nu = u.norm();
    if (nu == 0.0) return 0.0;
    const double next = std::sqrt(nu);
    v = u / nu;
    if (std::abs(next - estimate) <= 1e-13 * next) {
      estimate = next;
      break;
    }
    estimate = next;
  }
  return estimate;
}

}  // namespace conic
