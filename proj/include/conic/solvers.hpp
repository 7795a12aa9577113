#pragma once

#include "conic/duality.hpp"

#include <optional>
#include <utility>
#include <stdexcept>
#include <vector>

namespace conic {

class UnsupportedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class StepSchedule {
  Auto,              ///< proximal gradient for ball caps, Polyak otherwise
  ProximalGradient,  ///< accelerated proximal gradient with restart (ball caps only)
  InvSqrt,           ///< normalised subgradient steps step0 / sqrt(k + 1)
  PolyakEstimate,    ///< Polyak steps against the best available lower bound
};

struct SolverConfig {
  long max_iter = 4'000'000;
  double step0 = 1.0;
  StepSchedule schedule = StepSchedule::Auto;
  /// Stationarity threshold; also the relative duality-gap threshold.
  double grad_tol = 1e-9;
  double diverge_norm = 1e6;
  double diverge_obj = -1e9;
  /// Samples (one every 16 iterations) over which the value must stall for
  /// non-attainment.
  int stall_window = 20;
  /// Dual norm past which a stalled, growing trajectory counts as non-attained.
  double nonattain_norm = 1e3;
  /// A candidate ray d (unit) is accepted when sigma(A^T d) <= ray_tol and
  /// <b, d> - epsilon > ray_margin * ||b||.
  double ray_tol = 1e-9;
  double ray_margin = 1e-6;
  /// Face tolerance used when recovering primal points on nonsmooth generators.
  double face_tol = 1e-6;
  /// Iterations between primal recoveries in the subgradient method.
  int recovery_stride = 25;
  double pdhg_tau = 0.0;    ///< 0 selects 1 / ||A||
  double pdhg_sigma = 0.0;  ///< 0 selects 1 / ||A||
  long pdhg_max_iter = 20'000'000;
  std::optional<Vector> y0;
  /// Record one trace row every `trace_stride` iterations; 0 disables.
  long trace_stride = 0;

  /// Throws std::invalid_argument when a field is out of range, including the
  /// PDHG step condition tau * sigma * ||A||^2 <= 1.
  void validate(const LinearMap& A) const;
};

enum class SolveStatus { Converged, UnboundedBelow, NonAttainedSuspected, MaxIter };

const char* to_string(SolveStatus status);

struct TraceRow {
  long iter = 0;
  double value = 0.0;
  double y_norm = 0.0;
  double subgrad_norm = 0.0;
};

struct SolveReport {
  SolveStatus status = SolveStatus::MaxIter;
  Vector y_final;  ///< iterate achieving best_value
  double best_value = 0.0;
  std::optional<Vector> ray;  ///< unit direction, set for UnboundedBelow
  std::vector<TraceRow> trace;
  /// (iteration, <b,y>/sigma(A^T y)) at power-of-two iterations; a diverging
  /// ratio is evidence that no Farkas constant exists.
  std::vector<std::pair<long, double>> ratio_trace;
  long iterations = 0;
};

/**
 * Minimises J(y) = 1/2 sigma_K(A^T y)^2 - <b,y> + epsilon ||y||.
 *
 * Ball caps make the first term continuously differentiable with an
 * ||A||^2-Lipschitz gradient, so the default there is an accelerated
 * proximal gradient method on the norm term. Polytopes and boxes use a
 * subgradient method with periodic primal recovery; Converged then means the
 * duality gap against the recovered primal point has closed.
 */
SolveReport minimize_dual(const Instance& inst, const SolverConfig& cfg);

struct PdhgResult {
  Vector x;
  Vector y;  ///< dual point for J, i.e. the negated multiplier z
  SolveReport report;
};

/**
 * Primal-dual hybrid gradient on the Lagrangian
 * <z, Ax> + 1/2 j_K(x)^2 - <b, z> - epsilon ||z||, accelerated with the unit
 * strong convexity of the primal term. Ball-cap generators only.
 */
PdhgResult pdhg_solve(const Instance& inst, const SolverConfig& cfg);

/// Largest singular value of A by power iteration on A^T A.
double estimate_operator_norm(const LinearMap& A);

}  // namespace conic
