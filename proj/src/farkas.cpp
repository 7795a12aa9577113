#include "conic/farkas.hpp"

#include "conic/nnls.hpp"

#include <cmath>
#include <limits>

namespace conic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void copy_dual_run(Outcome& out, SolveReport& report) {
  out.dual_status = report.status;
  out.iterations = report.iterations;
  out.trace = std::move(report.trace);
  out.ratio_trace = std::move(report.ratio_trace);
}

bool primal_point_ok(const Instance& inst, const Vector& x, double rel_tol) {
  if (!x.allFinite()) return false;
  const double residual = (inst.A.apply(x) - inst.b).norm();
  return residual <= inst.epsilon + rel_tol * (1.0 + inst.b.norm()) && std::isfinite(inst.generator.gauge(x));
}

void fill_primal(Outcome& out, const Instance& inst, const Vector& x, const Vector& y) {
  const double lambda = inst.generator.gauge(x);
  out.x = x;
  out.y = y;
  out.lambda_star = lambda;
  out.pi = 0.5 * lambda * lambda;
  out.gap = *out.pi + dual_objective(inst, y);
  if (inst.epsilon == 0.0) out.farkas_constant = lambda;
  out.verdict = Verdict::Feasible;
}

bool recovery_unique(const Instance& inst, const Vector& y, const Recovery& rec) {
  return rec.unique && inst.generator.scaled_subgradient(inst.A.adjoint_apply(y)).unique;
}

void attach_certificate(Outcome& out, const Instance& inst, const SolveReport& report) {
  if (report.ray && certificate_verify(inst, *report.ray, kCertificateTol)) out.certificate = *report.ray;
}

// Orthonormal basis of ker(A), one vector per column.
Matrix kernel_basis(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  const double cutoff = 1e-10 * std::max(1.0, s.size() > 0 ? s(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > cutoff) ++rank;
  return svd.matrixV().rightCols(a.cols() - rank);
}

AttainmentDiagnosis diagnose_orthant(const Matrix& kernel, const Vector& x_star, double tol) {
  std::vector<Eigen::Index> zero_set;
  for (Eigen::Index i = 0; i < x_star.size(); ++i) {
    if (x_star(i) <= tol) zero_set.push_back(i);
  }
  const auto nz = static_cast<Eigen::Index>(zero_set.size());
  // v = x* - E_Z mu with mu >= 0 must be orthogonal to ker(A).
  Matrix kz(kernel.cols(), nz);
  for (Eigen::Index j = 0; j < nz; ++j) kz.col(j) = kernel.row(zero_set[static_cast<std::size_t>(j)]).transpose();
  const Vector target = kernel.transpose() * x_star;
  const double scale = 1.0 + x_star.norm();

  NnlsResult fit = nnls(kz, target, 50 * static_cast<int>(nz + 1), 1e-12);
  if (fit.residual_norm <= tol * scale) {
    Vector v = x_star;
    for (Eigen::Index j = 0; j < nz; ++j) v(zero_set[static_cast<std::size_t>(j)]) -= fit.coefficients(j);
    v -= kernel * (kernel.transpose() * v);
    return {AttainmentKind::AttainedPossible, v};
  }
  if (nz == 0) return {AttainmentKind::NoSharedNormal, std::nullopt};

  // Shared normals orthogonal to x*: nonzero q = -E_Z mu in ran(A^T).
  Matrix kz1(kz.rows() + 1, nz);
  kz1.topRows(kz.rows()) = kz;
  kz1.row(kz.rows()).setOnes();
  Vector rhs = Vector::Zero(kz.rows() + 1);
  rhs(kz.rows()) = 1.0;
  fit = nnls(kz1, rhs, 50 * static_cast<int>(nz + 1), 1e-12);
  if (fit.residual_norm <= tol) {
    Vector q = Vector::Zero(x_star.size());
    for (Eigen::Index j = 0; j < nz; ++j) q(zero_set[static_cast<std::size_t>(j)]) = -fit.coefficients(j);
    return {AttainmentKind::AllNormalsOrthogonal, q};
  }
  return {AttainmentKind::NoSharedNormal, std::nullopt};
}

AttainmentDiagnosis diagnose_second_order(const Matrix& kernel, double alpha, const Vector& x_star, double tol) {
  const Eigen::Index n = x_star.size() - 1;
  const Vector head = x_star.head(n);
  const double last = x_star(n);
  const double hn = head.norm();
  const double scale = 1.0 + x_star.norm();
  auto in_range = [&](const Vector& v) { return (kernel.transpose() * v).norm() <= tol * (1.0 + v.norm()); };

  // Interior point (or a cone without a head): P° ∩ {x*}^⊥ = {0}.
  if (n == 0 || hn < alpha * last - tol * scale) {
    if (in_range(x_star)) return {AttainmentKind::AttainedPossible, x_star};
    return {AttainmentKind::NoSharedNormal, std::nullopt};
  }

  // Boundary point: P° ∩ {x*}^⊥ is the ray through q0 = (head/|head|, -alpha).
  Vector q0(n + 1);
  q0.head(n) = head / hn;
  q0(n) = -alpha;
  Matrix m(kernel.cols(), 2);
  m.col(0) = kernel.transpose() * x_star;
  m.col(1) = kernel.transpose() * q0;
  if (m.rows() == 0) return {AttainmentKind::AttainedPossible, x_star};

  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > tol * std::max(1.0, s(0))) ++rank;
  if (rank == 0) return {AttainmentKind::AttainedPossible, x_star};
  if (rank == 2) return {AttainmentKind::NoSharedNormal, std::nullopt};

  Vector coeffs = svd.matrixV().col(1);  // spans the null space of m
  if (coeffs(1) < 0.0 || (coeffs(1) == 0.0 && coeffs(0) < 0.0)) coeffs = -coeffs;
  const double t = coeffs(0);
  const double mu = coeffs(1);
  if (t > tol && mu >= -tol) {
    return {AttainmentKind::AttainedPossible, Vector(t * x_star + std::max(mu, 0.0) * q0)};
  }
  if (std::abs(t) <= tol && mu > tol) return {AttainmentKind::AllNormalsOrthogonal, q0};
  return {AttainmentKind::NoSharedNormal, std::nullopt};
}

double ray_angle(const Vector& x, const Vector& p) {
  const Vector xu = x.normalized();
  const Vector pu = p.normalized();
  return 2.0 * std::atan2((xu - pu).norm(), (xu + pu).norm());
}

// Primal-dual route for x when the dual minimiser is missing or was not
// reached. Without `require_converged`, a point meeting the weak residual
// tolerance is accepted.
void primal_fallback(Outcome& out, const Instance& inst, const SolverConfig& cfg, const SolveReport& report,
                     bool require_converged) {
  if (inst.generator.kind() != GeneratorSet::Kind::BallCap) {
    out.diagnostic = "no primal fallback for this generator";
    return;
  }
  const PdhgResult pd = pdhg_solve(inst, cfg);
  const bool converged = pd.report.status == SolveStatus::Converged;
  if ((require_converged && !converged) ||
      !primal_point_ok(inst, pd.x, converged ? kFeasibleTol : kWeakFeasibleTol)) {
    out.diagnostic = "the primal-dual fallback did not reach feasibility";
    return;
  }
  // Weakly constructive: x comes from the primal route, y from the dual trace.
  fill_primal(out, inst, pd.x, report.y_final);
  out.unique_recovery = true;  // strongly convex primal
  const Cone& cone = inst.generator.cone();
  const auto kind = cone.kind();
  if (kind == Cone::Kind::NonnegativeOrthant || kind == Cone::Kind::SecondOrder) {
    const AttainmentDiagnosis diag = diagnose_attainment(inst.A, inst.b, cone, pd.x, kWeakFeasibleTol);
    out.diagnostic = std::string("shared normals: ") + to_string(diag.kind);
    if (diag.kind != AttainmentKind::AttainedPossible) out.dual_attained = DualAttainment::No;
  }
}

}  // namespace

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Feasible:
      return "Feasible";
    case Verdict::InfeasibleClosure:
      return "InfeasibleClosure";
    case Verdict::ExactInfeasibleEvidence:
      return "ExactInfeasibleEvidence";
    case Verdict::Unresolved:
      return "Unresolved";
  }
  return "?";
}

const char* to_string(DualAttainment attained) {
  switch (attained) {
    case DualAttainment::Yes:
      return "Yes";
    case DualAttainment::No:
      return "No";
    case DualAttainment::Suspected:
      return "Suspected";
    case DualAttainment::Unknown:
      return "Unknown";
  }
  return "?";
}

const char* to_string(AttainmentKind kind) {
  switch (kind) {
    case AttainmentKind::AttainedPossible:
      return "AttainedPossible";
    case AttainmentKind::AllNormalsOrthogonal:
      return "AllNormalsOrthogonal";
    case AttainmentKind::NoSharedNormal:
      return "NoSharedNormal";
  }
  return "?";
}

bool certificate_verify(const Instance& inst, const Vector& y, double tol) {
  require_dim(y.size(), inst.A.rows(), "certificate_verify");
  const double ny = y.norm();
  if (!(ny > 0.0)) throw std::invalid_argument("certificate_verify: zero certificate");
  const double sigma = inst.generator.support_value(inst.A.adjoint_apply(y));
  return sigma <= tol * ny && inst.b.dot(y) > tol * ny * inst.b.norm();
}

bool certificate_separates(const Instance& inst, const Vector& y, double tol) {
  return certificate_verify(inst, y, tol) && inst.b.dot(y) > (inst.epsilon + tol * inst.b.norm()) * y.norm();
}

Outcome solve_approximate(const Instance& inst, const SolverConfig& cfg) {
  if (!(inst.epsilon > 0.0)) throw std::invalid_argument("solve_approximate: epsilon must be positive");
  SolveReport report = minimize_dual(inst, cfg);
  Outcome out;

  switch (report.status) {
    case SolveStatus::Converged: {
      const Vector& y = report.y_final;
      const Recovery rec = recover_primal(inst, y, cfg.face_tol);
      out.dual_attained = DualAttainment::Yes;
      if (primal_point_ok(inst, rec.x, kFeasibleTol)) {
        fill_primal(out, inst, rec.x, y);
        out.unique_recovery = recovery_unique(inst, y, rec);
      } else {
        out.diagnostic = "recovered primal point misses the residual tolerance";
      }
      break;
    }
    case SolveStatus::UnboundedBelow:
      attach_certificate(out, inst, report);
      out.dual_attained = DualAttainment::No;
      if (out.certificate) {
        out.verdict = Verdict::InfeasibleClosure;
        out.y = report.y_final;
      } else {
        out.diagnostic = "diverging dual ray failed certificate verification";
      }
      break;
    case SolveStatus::NonAttainedSuspected:
    case SolveStatus::MaxIter:
      out.diagnostic = std::string("dual solver stopped with ") + to_string(report.status);
      break;
  }
  copy_dual_run(out, report);
  return out;
}

Outcome solve_exact(const Instance& inst, const SolverConfig& cfg) {
  if (inst.epsilon != 0.0) throw std::invalid_argument("solve_exact: epsilon must be zero");
  SolveReport report = minimize_dual(inst, cfg);
  Outcome out;

  switch (report.status) {
    case SolveStatus::Converged: {
      const Vector& y = report.y_final;
      const Recovery rec = recover_primal(inst, y, cfg.face_tol);
      out.dual_attained = DualAttainment::Yes;
      if (primal_point_ok(inst, rec.x, kFeasibleTol)) {
        fill_primal(out, inst, rec.x, y);
        out.unique_recovery = recovery_unique(inst, y, rec);
      } else {
        out.diagnostic = "recovered primal point misses the residual tolerance";
      }
      break;
    }
    case SolveStatus::NonAttainedSuspected:
      out.dual_attained = DualAttainment::Suspected;
      primal_fallback(out, inst, cfg, report, false);
      break;
    case SolveStatus::UnboundedBelow:
      out.verdict = Verdict::ExactInfeasibleEvidence;
      out.y = report.y_final;
      out.farkas_constant = kInf;
      out.dual_attained = DualAttainment::No;
      attach_certificate(out, inst, report);
      break;
    case SolveStatus::MaxIter:
      primal_fallback(out, inst, cfg, report, true);
      if (out.verdict != Verdict::Feasible) out.diagnostic = "dual solver reached its iteration cap; " + out.diagnostic;
      break;
  }
  copy_dual_run(out, report);
  return out;
}

Outcome solve(const Instance& inst, const SolverConfig& cfg) {
  return inst.epsilon > 0.0 ? solve_approximate(inst, cfg) : solve_exact(inst, cfg);
}

Outcome solve_pdhg(const Instance& inst, const SolverConfig& cfg) {
  PdhgResult pd = pdhg_solve(inst, cfg);
  Outcome out;
  const double tol = pd.report.status == SolveStatus::Converged ? kFeasibleTol : kWeakFeasibleTol;
  if (primal_point_ok(inst, pd.x, tol)) {
    fill_primal(out, inst, pd.x, pd.y);
    out.unique_recovery = true;
  } else {
    out.diagnostic = "primal-dual iterates did not reach feasibility";
  }
  out.dual_attained = pd.report.status == SolveStatus::Converged ? DualAttainment::Yes : DualAttainment::Unknown;
  copy_dual_run(out, pd.report);
  return out;
}

double farkas_constant(const Instance& inst, const SolverConfig& cfg) {
  if (inst.epsilon != 0.0) throw std::invalid_argument("farkas_constant: epsilon must be zero");
  const Outcome out = solve_exact(inst, cfg);
  if (out.verdict == Verdict::Feasible) return std::sqrt(2.0 * *out.pi);
  if (out.verdict == Verdict::ExactInfeasibleEvidence) return kInf;
  throw UnresolvedError("farkas_constant: " + out.diagnostic);
}

Vector least_norm_pseudoinverse(const LinearMap& A, const Vector& b, const Cone& P, const SolverConfig& cfg) {
  const Instance inst(A, b, GeneratorSet::ball_cap(P), 0.0);
  Outcome out = solve_exact(inst, cfg);
  if (out.verdict == Verdict::Feasible) return *out.x;
  if (out.verdict == Verdict::ExactInfeasibleEvidence) throw InfeasibleError("least_norm_pseudoinverse: b is not in A(P)");
  throw UnresolvedError("least_norm_pseudoinverse: " + out.diagnostic);
}

AttainmentDiagnosis diagnose_attainment(const LinearMap& A, const Vector& b, const Cone& P, const Vector& x_star,
                                        double tol) {
  require_dim(x_star.size(), A.cols(), "diagnose_attainment x_star");
  require_dim(b.size(), A.rows(), "diagnose_attainment b");
  require_dim(P.dim(), A.cols(), "diagnose_attainment cone");
  if (!(tol > 0.0)) throw std::invalid_argument("diagnose_attainment: tolerance must be positive");
  const auto kind = P.kind();
  if (kind != Cone::Kind::NonnegativeOrthant && kind != Cone::Kind::SecondOrder) {
    throw UnsupportedError("diagnose_attainment: only orthant and second-order cones are supported");
  }
  if ((A.apply(x_star) - b).norm() > tol * (1.0 + b.norm()) || !P.contains(x_star, tol)) {
    throw std::invalid_argument("diagnose_attainment: x_star is not a solution of Ax = b in P");
  }
  // b = 0: the dual minimum 0 is attained at y = 0.
  if (x_star.norm() <= tol) return {AttainmentKind::AttainedPossible, Vector::Zero(x_star.size())};

  const Matrix kernel = kernel_basis(A.matrix());
  if (kernel.cols() == 0) return {AttainmentKind::AttainedPossible, x_star};
  if (kind == Cone::Kind::NonnegativeOrthant) return diagnose_orthant(kernel, x_star, tol);
  return diagnose_second_order(kernel, P.alpha(), x_star, tol);
}

Outcome relax_and_solve(const LinearMap& A, const Vector& b, const std::vector<Vector>& raw_points, double epsilon,
                        const SolverConfig& cfg) {
  const Instance inst(A, b, GeneratorSet::polytope(raw_points), epsilon);
  const ExtremalityReport extremality = extremality_check(raw_points);
  Outcome out = solve(inst, cfg);
  if (out.verdict != Verdict::Feasible) return out;

  if (!extremality.holds) {
    out.diagnostic = "extreme points of the relaxed generator are missing from the input";
    return out;
  }
  if (!out.unique_recovery) {
    out.diagnostic = "singular recovery: the support face at the dual solution is not a single point";
    return out;
  }
  const Vector& x = *out.x;
  if (x.norm() == 0.0) {
    out.in_original_cone = true;
    return out;
  }
  double best_angle = kInf;
  for (const auto& p : raw_points) {
    if (p.norm() > 0.0) best_angle = std::min(best_angle, ray_angle(x, p));
  }
  if (best_angle <= kCollinearityAngle) {
    out.in_original_cone = true;
  } else {
    out.diagnostic = "recovered point is not collinear with any raw generator";
  }
  return out;
}

}  // namespace conic
