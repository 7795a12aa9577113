#include "conic/nnls.hpp"

#include <algorithm>
#include <vector>

namespace conic {

namespace {

Vector solve_passive(const Matrix& R, const Vector& x, const std::vector<Eigen::Index>& passive) {
  Matrix sub(R.rows(), static_cast<Eigen::Index>(passive.size()));
  for (std::size_t k = 0; k < passive.size(); ++k) sub.col(k) = R.col(passive[k]);
  return sub.colPivHouseholderQr().solve(x);
}

}  // namespace

NnlsResult nnls(const Matrix& R, const Vector& x, int max_iter, double tol) {
  require_dim(x.size(), R.rows(), "nnls");
  const Eigen::Index k = R.cols();
  NnlsResult out;
  out.coefficients = Vector::Zero(k);
  if (k == 0) {
    out.residual_norm = x.norm();
    out.converged = true;
    return out;
  }

  const double col_scale = R.colwise().norm().maxCoeff();
  const double threshold = tol * (1.0 + x.norm()) * std::max(col_scale, 1.0);

  Vector& c = out.coefficients;
  std::vector<bool> is_passive(static_cast<std::size_t>(k), false);
  Vector w = R.transpose() * x;

  for (int it = 0; it < max_iter; ++it) {
    out.iterations = it + 1;
    Eigen::Index best = -1;
    double best_w = threshold;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (!is_passive[static_cast<std::size_t>(j)] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    }
    if (best < 0) {
      out.converged = true;
      break;
    }
    is_passive[static_cast<std::size_t>(best)] = true;

    // Inner loop keeps the passive coefficients strictly positive.
    for (int inner_it = 0; inner_it <= k; ++inner_it) {
      std::vector<Eigen::Index> passive;
      for (Eigen::Index j = 0; j < k; ++j) {
        if (is_passive[static_cast<std::size_t>(j)]) passive.push_back(j);
      }
      const Vector s = solve_passive(R, x, passive);
      double step = 1.0;
      bool feasible = true;
      for (std::size_t p = 0; p < passive.size(); ++p) {
        if (s(static_cast<Eigen::Index>(p)) <= 0.0) {
          feasible = false;
          const double cj = c(passive[p]);
          const double denom = cj - s(static_cast<Eigen::Index>(p));
          if (denom > 0.0) step = std::min(step, cj / denom);
        }
      }
      if (feasible) {
        c.setZero();
        for (std::size_t p = 0; p < passive.size(); ++p) c(passive[p]) = s(static_cast<Eigen::Index>(p));
        break;
      }
      for (std::size_t p = 0; p < passive.size(); ++p) {
        const Eigen::Index j = passive[p];
        c(j) += step * (s(static_cast<Eigen::Index>(p)) - c(j));
        if (c(j) <= 1e-15 * (1.0 + c.cwiseAbs().maxCoeff())) {
          c(j) = 0.0;
          is_passive[static_cast<std::size_t>(j)] = false;
        }
      }
    }
    w = R.transpose() * (x - R * c);
  }

  const Vector residual = x - R * c;
  out.residual_norm = residual.norm();
  w = R.transpose() * residual;
  double viol = 0.0;
  for (Eigen::Index j = 0; j < k; ++j) {
    if (!is_passive[static_cast<std::size_t>(j)]) viol = std::max(viol, w(j));
  }
  out.kkt_violation = viol;
  return out;
}

}  // namespace conic
