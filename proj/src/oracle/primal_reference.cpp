#include "conic/oracle.hpp"

namespace conic::oracle {

ResidualBallProjector::ResidualBallProjector(const Matrix& a, const Vector& b, double epsilon) : epsilon_(epsilon) {
  require_dim(b.size(), a.rows(), "ResidualBallProjector b");
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double cutoff = 1e-12 * std::max(1.0, s.size() > 0 ? s(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > cutoff) ++rank;
  s_ = s.head(rank);
  v_ = svd.matrixV().leftCols(rank);
  const Matrix u = svd.matrixU().leftCols(rank);
  c_ = u.transpose() * b;
  outside_ = std::max(0.0, b.squaredNorm() - c_.squaredNorm());
  const double slack = 1e-12 * (1.0 + b.squaredNorm());
  if (outside_ > epsilon * epsilon + slack) {
    throw std::invalid_argument("primal_reference: the residual ball does not meet ran(A)");
  }
}

Vector ResidualBallProjector::project(const Vector& x) const {
  const Vector w = v_.transpose() * x;
  const Vector e = s_.cwiseProduct(w) - c_;  // in-range residual of x
  auto residual_sq = [&](double mu) {
    return (e.array() / (1.0 + mu * s_.array().square())).matrix().squaredNorm() + outside_;
  };
  const double eps2 = epsilon_ * epsilon_;
  if (residual_sq(0.0) <= eps2) return x;

  Vector target_w;
  if (epsilon_ == 0.0 || outside_ >= eps2) {
    target_w = c_.cwiseQuotient(s_);  // affine projection
  } else {
    double lo = 0.0;
    double hi = 1.0;
    while (residual_sq(hi) > eps2 && hi < 1e300) hi *= 2.0;
    for (int k = 0; k < 200 && hi - lo > 1e-15 * hi; ++k) {
      const double mid = 0.5 * (lo + hi);
      (residual_sq(mid) > eps2 ? lo : hi) = mid;
    }
    target_w = w - (hi * s_.cwiseProduct(e).array() / (1.0 + hi * s_.array().square())).matrix();
  }
  return x + v_ * (target_w - w);
}

ReferenceResult primal_reference(const Instance& inst, const ReferenceConfig& cfg) {
  if (inst.generator.kind() != GeneratorSet::Kind::BallCap) {
    throw std::invalid_argument("primal_reference: ball-cap generators only");
  }
  const Cone& cone = inst.generator.cone();
  const ResidualBallProjector ball(inst.A.matrix(), inst.b, inst.epsilon);
  const Eigen::Index n = inst.A.cols();

  ReferenceResult out;
  Vector x = Vector::Zero(n);  // iterate in the residual ball
  Vector y(n);                 // iterate in the cone
  Vector p = Vector::Zero(n);
  Vector q = Vector::Zero(n);
  Vector tmp(n);
  for (long k = 1; k <= cfg.max_iter; ++k) {
    tmp = x + p;
    cone.project_to(tmp, y);
    p = tmp - y;
    tmp = y + q;
    const Vector next = ball.project(tmp);
    q = tmp - next;
    const double moved = (next - x).norm();
    x = next;
    out.iterations = k;
    if (moved <= cfg.tol * (1.0 + x.norm()) && (x - y).norm() <= cfg.gap_tol * (1.0 + x.norm())) {
      out.converged = true;
      break;
    }
  }
  out.x = y;
  out.pi = 0.5 * y.squaredNorm();
  return out;
}

}  // namespace conic::oracle
