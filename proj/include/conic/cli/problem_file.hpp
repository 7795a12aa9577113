#pragma once

#include "conic/duality.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace conic::cli {

/// Schema violation; `path` names the offending field, e.g. "generator.points[2]".
class SchemaError : public std::invalid_argument {
 public:
  SchemaError(const std::string& path, const std::string& message)
      : std::invalid_argument(path + ": " + message), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// b and epsilon are multiplied by `scale` before solving.
struct Normalisation {
  double scale = 1.0;
  double b_norm = 0.0;  ///< norm of the original b
};

struct ProblemFile {
  Instance original;
  Instance scaled;
  Normalisation normalisation;
};

/// Brings ||b|| into [0.5, 2] when b != 0; identity scale otherwise.
Normalisation choose_normalisation(const Vector& b);

ProblemFile parse_problem(const nlohmann::json& doc);
/// Throws std::runtime_error when the file cannot be read or is not JSON.
ProblemFile load_problem(const std::string& path);

nlohmann::json cone_to_json(const Cone& cone);
nlohmann::json instance_to_json(const Instance& inst);

}  // namespace conic::cli
