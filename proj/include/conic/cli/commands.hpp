#pragma once

#include "conic/farkas.hpp"
#include "conic/cli/problem_file.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace conic::cli {

enum ExitCode : int { kExitFeasible = 0, kExitInput = 1, kExitInfeasible = 2, kExitUnresolved = 3 };

struct CommandOptions {
  std::optional<std::string> trace_path;
  long trace_stride = 1;
  std::optional<long> max_iter;
  std::optional<double> tol;
  /// 0 starts the dual at the origin; otherwise a seeded random unit start.
  std::uint64_t seed = 0;
  std::string solver = "subgrad";  // or "pdhg"
  int threads = 0;                 // bench workers; 0 = hardware concurrency
};

SolverConfig make_config(const CommandOptions& opts, Eigen::Index m);

/// Outcome of the scaled problem, de-normalised to the units of the file.
nlohmann::json outcome_to_json(const Outcome& out, const Normalisation& norm);
int exit_code(Verdict verdict);

int cmd_solve(const std::string& path, const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_certify(const std::string& path, const std::vector<double>& y, const CommandOptions& opts, std::ostream& out,
                std::ostream& err);
int cmd_diagnose(const std::string& path, const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_pinv(const std::string& path, const CommandOptions& opts, std::ostream& out, std::ostream& err);

struct BenchRecord {
  long id = 0;
  std::string regime;
  std::string cone;
  Eigen::Index m = 0;
  Eigen::Index n = 0;
  double epsilon = 0.0;
  Verdict verdict = Verdict::Unresolved;
  long iterations = 0;
  std::optional<double> gap;
  bool x_verified = false;
  bool certificate_verified = false;  ///< some certificate (emitted or independent) separates b
  bool exclusivity_violation = false;
  bool closure_without_certificate = false;
  std::string error;
};

/// Solves `count` seeded instances concurrently; results sorted by id.
std::vector<BenchRecord> run_bench(std::uint64_t seed, long count, const CommandOptions& opts);
/// Writes the instances as JSON files into `dir` (created if needed) when
/// non-empty, prints the table and summary, and exits nonzero on any
/// exclusivity violation.
int cmd_bench(const std::string& dir, std::uint64_t seed, long count, const CommandOptions& opts, std::ostream& out,
              std::ostream& err);

}  // namespace conic::cli
