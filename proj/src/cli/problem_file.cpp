#include "conic/cli/problem_file.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace conic::cli {

using nlohmann::json;

namespace {

const json& field(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path.empty() ? key : path + "." + key, "missing field");
  return *it;
}

std::string join(const std::string& path, const char* key) { return path.empty() ? key : path + "." + key; }

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw SchemaError(path, "expected a finite number");
  return x;
}

Vector vector(const json& v, const std::string& path, Eigen::Index expected = -1) {
  if (!v.is_array()) throw SchemaError(path, "expected an array of numbers");
  if (v.empty()) throw SchemaError(path, "empty array");
  if (expected >= 0 && static_cast<Eigen::Index>(v.size()) != expected) {
    throw SchemaError(path, "expected length " + std::to_string(expected) + ", got " + std::to_string(v.size()));
  }
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = number(v[i], path + "[" + std::to_string(i) + "]");
  }
  return out;
}

std::vector<Vector> vectors(const json& v, const std::string& path, Eigen::Index dim) {
  if (!v.is_array() || v.empty()) throw SchemaError(path, "expected a non-empty array of vectors");
  std::vector<Vector> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(vector(v[i], path + "[" + std::to_string(i) + "]", dim));
  return out;
}

Matrix matrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw SchemaError(path, "expected a non-empty array of rows");
  const Vector first = vector(v[0], path + "[0]");
  Matrix out(static_cast<Eigen::Index>(v.size()), first.size());
  out.row(0) = first.transpose();
  for (std::size_t i = 1; i < v.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = vector(v[i], path + "[" + std::to_string(i) + "]", first.size()).transpose();
  }
  return out;
}

std::string type_of(const json& obj, const std::string& path) {
  const json& t = field(obj, path, "type");
  if (!t.is_string()) throw SchemaError(join(path, "type"), "expected a string");
  return t.get<std::string>();
}

Cone parse_cone(const json& obj, const std::string& path, Eigen::Index dim) {
  const std::string type = type_of(obj, path);
  if (type == "orthant") return Cone::orthant(dim);
  if (type == "soc") {
    double alpha = 1.0;
    if (obj.contains("alpha")) alpha = number(obj["alpha"], join(path, "alpha"));
    if (!(alpha > 0.0)) throw SchemaError(join(path, "alpha"), "must be positive");
    if (dim < 1) throw SchemaError(path, "second-order cone needs dimension >= 1");
    return Cone::second_order(dim, alpha);
  }
  if (type == "subspace") {
    const auto basis = vectors(field(obj, path, "basis"), join(path, "basis"), dim);
    try {
      return Cone::subspace(basis);
    } catch (const std::invalid_argument& e) {
      throw SchemaError(join(path, "basis"), e.what());
    }
  }
  if (type == "rays") return Cone::rays(vectors(field(obj, path, "rays"), join(path, "rays"), dim));
  throw SchemaError(join(path, "type"), "unknown cone type '" + type + "'");
}

GeneratorSet parse_generator(const json& obj, const std::string& path, Eigen::Index dim) {
  const std::string type = type_of(obj, path);
  if (type == "ball_cap") return GeneratorSet::ball_cap(parse_cone(field(obj, path, "cone"), join(path, "cone"), dim));
  if (type == "polytope") {
    return GeneratorSet::polytope(vectors(field(obj, path, "points"), join(path, "points"), dim));
  }
  if (type == "box") {
    const Vector upper = vector(field(obj, path, "upper"), join(path, "upper"), dim);
    if ((upper.array() < 0.0).any()) throw SchemaError(join(path, "upper"), "entries must be nonnegative");
    return GeneratorSet::box(upper);
  }
  throw SchemaError(join(path, "type"), "unknown generator type '" + type + "'");
}

Instance scaled_copy(const Instance& inst, double scale) {
  return Instance(inst.A, scale * inst.b, inst.generator, scale * inst.epsilon);
}

}  // namespace

Normalisation choose_normalisation(const Vector& b) {
  Normalisation n;
  n.b_norm = b.norm();
  if (n.b_norm > 0.0 && (n.b_norm < 0.5 || n.b_norm > 2.0)) n.scale = 1.0 / n.b_norm;
  return n;
}

ProblemFile parse_problem(const json& doc) {
  if (!doc.is_object()) throw SchemaError("$", "expected a JSON object");
  const Matrix a = matrix(field(doc, "", "A"), "A");
  const Vector b = vector(field(doc, "", "b"), "b", a.rows());
  double epsilon = 0.0;
  if (doc.contains("epsilon")) epsilon = number(doc["epsilon"], "epsilon");
  if (epsilon < 0.0) throw SchemaError("epsilon", "must be nonnegative");

  const bool has_cone = doc.contains("cone");
  const bool has_generator = doc.contains("generator");
  if (has_cone == has_generator) throw SchemaError("cone", "exactly one of 'cone' and 'generator' is required");
  GeneratorSet gen = has_cone ? GeneratorSet::ball_cap(parse_cone(doc["cone"], "cone", a.cols()))
                              : parse_generator(doc["generator"], "generator", a.cols());

  Instance original(LinearMap(a), b, std::move(gen), epsilon);
  const Normalisation norm = choose_normalisation(b);
  Instance scaled = scaled_copy(original, norm.scale);
  return ProblemFile{std::move(original), std::move(scaled), norm};
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("'" + path + "' is not valid JSON: " + e.what());
  }
  return parse_problem(doc);
}

namespace {

json vector_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

json columns_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(vector_json(m.col(j)));
  return out;
}

}  // namespace

json cone_to_json(const Cone& cone) {
  switch (cone.kind()) {
    case Cone::Kind::NonnegativeOrthant:
      return {{"type", "orthant"}};
    case Cone::Kind::SecondOrder:
      return {{"type", "soc"}, {"alpha", cone.alpha()}};
    case Cone::Kind::Subspace:
      return {{"type", "subspace"}, {"basis", columns_json(std::get<Cone::Subspace>(cone.variant()).basis)}};
    case Cone::Kind::PolyhedralRays:
      return {{"type", "rays"}, {"rays", columns_json(std::get<Cone::Rays>(cone.variant()).rays)}};
    case Cone::Kind::Product:
      break;
  }
  throw std::invalid_argument("cone_to_json: product cones have no file representation");
}

json instance_to_json(const Instance& inst) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < inst.A.rows(); ++i) rows.push_back(vector_json(inst.A.matrix().row(i).transpose()));
  json doc = {{"A", rows}, {"b", vector_json(inst.b)}, {"epsilon", inst.epsilon}};
  const auto& shape = inst.generator.variant();
  if (const auto* cap = std::get_if<GeneratorSet::BallCap>(&shape)) {
    doc["cone"] = cone_to_json(cap->cone);
  } else if (const auto* poly = std::get_if<GeneratorSet::Polytope>(&shape)) {
    doc["generator"] = {{"type", "polytope"}, {"points", columns_json(poly->points)}};
  } else {
    doc["generator"] = {{"type", "box"}, {"upper", vector_json(std::get<GeneratorSet::Box>(shape).upper)}};
  }
  return doc;
}

}  // namespace conic::cli
