#include "conic/oracle/simplex.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace conic::oracle {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-10;
constexpr double kFeasibilityTol = 1e-9;
constexpr int kMaxPivots = 50000;

// Tableau layout: rows 0..m-1 are constraints, row m is the cost row.
// Columns 0..ncols-1 are variables, column ncols is the right-hand side.
class Tableau {
 public:
  Tableau(Eigen::Index m, Eigen::Index ncols) : t_(Matrix::Zero(m + 1, ncols + 1)), m_(m), ncols_(ncols) {}

  double& at(Eigen::Index i, Eigen::Index j) { return t_(i, j); }
  double rhs(Eigen::Index i) const { return t_(i, ncols_); }
  double cost(Eigen::Index j) const { return t_(m_, j); }
  double objective() const { return -t_(m_, ncols_); }

  void pivot(Eigen::Index row, Eigen::Index col) {
    t_.row(row) /= t_(row, col);
    for (Eigen::Index i = 0; i <= m_; ++i) {
      if (i != row && t_(i, col) != 0.0) t_.row(i) -= t_(i, col) * t_.row(row);
    }
  }

  Matrix& raw() { return t_; }

 private:
  Matrix t_;
  Eigen::Index m_;
  Eigen::Index ncols_;
};

enum class PhaseResult { Optimal, Unbounded };

// Bland's rule: lowest-index entering column with negative reduced cost,
// ratio ties broken by lowest basic variable index.
PhaseResult run_phase(Tableau& tab, std::vector<Eigen::Index>& basis, Eigen::Index m,
                      Eigen::Index allowed_cols, int& pivots) {
  while (true) {
    if (++pivots > kMaxPivots) throw NumericalError("simplex: pivot limit reached", 0.0);
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < allowed_cols; ++j) {
      if (tab.cost(j) < -kCostTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return PhaseResult::Optimal;

    Eigen::Index leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      const double a = tab.at(i, enter);
      if (a > kPivotTol) {
        const double ratio = tab.rhs(i) / a;
        if (ratio < best_ratio - 1e-14 ||
            (std::abs(ratio - best_ratio) <= 1e-14 && leave >= 0 && basis[static_cast<std::size_t>(i)] <
                                                                       basis[static_cast<std::size_t>(leave)])) {
          best_ratio = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) return PhaseResult::Unbounded;
    tab.pivot(leave, enter);
    basis[static_cast<std::size_t>(leave)] = enter;
  }
}

}  // namespace

LpResult simplex_solve(const LpProblem& lp) {
  const Eigen::Index m = lp.equality.rows();
  const Eigen::Index n = lp.equality.cols();
  require_dim(lp.objective.size(), n, "simplex_solve objective");
  require_dim(lp.rhs.size(), m, "simplex_solve rhs");
  if (n > kSimplexMaxVariables || m > kSimplexMaxConstraints) {
    throw std::invalid_argument("simplex_solve: problem exceeds size limits");
  }
  if (!lp.equality.allFinite() || !lp.rhs.allFinite() || !lp.objective.allFinite()) {
    throw std::invalid_argument("simplex_solve: non-finite data");
  }

  LpResult result;
  if (m == 0) {
    // Only nonnegativity: optimal at 0 unless some cost is negative.
    for (Eigen::Index j = 0; j < n; ++j) {
      if (lp.objective(j) < 0.0) {
        result.status = LpStatus::Unbounded;
        return result;
      }
    }
    result.status = LpStatus::Optimal;
    result.solution = Vector::Zero(n);
    return result;
  }

  const Eigen::Index ncols = n + m;  // structural + artificial
  Tableau tab(m, ncols);
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sign = lp.rhs(i) < 0.0 ? -1.0 : 1.0;
    tab.raw().row(i).head(n) = sign * lp.equality.row(i);
    tab.at(i, n + i) = 1.0;
    tab.at(i, ncols) = sign * lp.rhs(i);
    basis[static_cast<std::size_t>(i)] = n + i;
  }
  // Phase I cost: sum of artificials, expressed in nonbasic terms.
  for (Eigen::Index i = 0; i < m; ++i) tab.raw().row(m) -= tab.raw().row(i);
  for (Eigen::Index i = 0; i < m; ++i) tab.at(m, n + i) = 0.0;

  run_phase(tab, basis, m, ncols, result.pivots);
  const double scale = 1.0 + lp.rhs.cwiseAbs().maxCoeff();
  if (tab.objective() > kFeasibilityTol * scale) {
    result.status = LpStatus::Infeasible;
    return result;
  }

  // Drive zero-level artificials out of the basis where possible; rows where
  // no structural pivot exists are redundant and stay inert.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (basis[static_cast<std::size_t>(i)] < n) continue;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(tab.at(i, j)) > 1e-9) {
        tab.pivot(i, j);
        basis[static_cast<std::size_t>(i)] = j;
        break;
      }
    }
  }

  // Phase II cost row.
  tab.raw().row(m).setZero();
  tab.raw().row(m).head(n) = lp.objective.transpose();
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index bj = basis[static_cast<std::size_t>(i)];
    if (bj < n && tab.at(m, bj) != 0.0) tab.raw().row(m) -= tab.at(m, bj) * tab.raw().row(i);
  }

  if (run_phase(tab, basis, m, n, result.pivots) == PhaseResult::Unbounded) {
    result.status = LpStatus::Unbounded;
    return result;
  }

  Vector lambda = Vector::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index bj = basis[static_cast<std::size_t>(i)];
    if (bj < n) lambda(bj) = std::max(0.0, tab.rhs(i));
  }
  const double residual = (lp.equality * lambda - lp.rhs).norm();
  if (residual > 1e-9 * scale) {
    throw NumericalError("simplex_solve: equality residual too large", residual);
  }
  result.status = LpStatus::Optimal;
  result.duals.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    // Reduced cost of artificial i is -w_i in the sign-flipped rows.
    result.duals(i) = (lp.rhs(i) < 0.0 ? 1.0 : -1.0) * tab.at(m, n + i);
  }
  result.value = lp.objective.dot(lambda);
  result.solution = std::move(lambda);
  return result;
}

std::optional<Vector> central_duals(const LpProblem& lp, const LpResult& solved) {
  if (solved.status != LpStatus::Optimal) return std::nullopt;
  const Eigen::Index m = lp.equality.rows(), n = lp.equality.cols();
  const double cutoff = 1e-12 * (1.0 + solved.solution.cwiseAbs().maxCoeff());

  // max s  s.t.  E_j^T w + [j off support] s <= c_j,  r^T w = value,  s <= 1
  // over w = w+ - w-, s and the row slacks.
  const Eigen::Index cols = 2 * m + 1 + n + 1;
  LpProblem dual;
  dual.objective = Vector::Zero(cols);
  dual.objective(2 * m) = -1.0;
  dual.equality = Matrix::Zero(n + 2, cols);
  dual.rhs = Vector::Zero(n + 2);
  for (Eigen::Index j = 0; j < n; ++j) {
    dual.equality.block(j, 0, 1, m) = lp.equality.col(j).transpose();
    dual.equality.block(j, m, 1, m) = -lp.equality.col(j).transpose();
    if (solved.solution(j) <= cutoff) dual.equality(j, 2 * m) = 1.0;
    dual.equality(j, 2 * m + 1 + j) = 1.0;
    dual.rhs(j) = lp.objective(j);
  }
  dual.equality.block(n, 0, 1, m) = lp.rhs.transpose();
  dual.equality.block(n, m, 1, m) = -lp.rhs.transpose();
  dual.rhs(n) = solved.value;
  dual.equality(n + 1, 2 * m) = 1.0;
  dual.equality(n + 1, cols - 1) = 1.0;
  dual.rhs(n + 1) = 1.0;

  const LpResult res = simplex_solve(dual);
  if (res.status != LpStatus::Optimal) return std::nullopt;
  return Vector(res.solution.head(m) - res.solution.segment(m, m));
}

}  // namespace conic::oracle
