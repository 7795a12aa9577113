#include "conic/cli/commands.hpp"

#include "conic/cli/instance_gen.hpp"
#include "conic/nnls.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <thread>

namespace conic::cli {

using nlohmann::json;

namespace {

json vector_json(const Vector& v, double factor = 1.0) {
  std::vector<double> out(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = factor * v(i);
  return out;
}

template <class T, class F>
json optional_json(const std::optional<T>& v, F&& f) {
  return v ? f(*v) : json(nullptr);
}

json scalar_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string gap_text(const std::optional<double>& gap) {
  if (!gap) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", *gap);
  return buf;
}

void write_trace(const std::string& path, const Outcome& outcome, double scale) {
  std::ofstream csv(path);
  if (!csv) throw std::runtime_error("cannot write trace file '" + path + "'");
  const double inv = 1.0 / scale;
  csv << "iter,J_value,y_norm,subgrad_norm\n";
  for (const auto& row : outcome.trace) {
    csv << row.iter << ',' << format17(row.value * inv * inv) << ',' << format17(row.y_norm * inv) << ','
        << format17(row.subgrad_norm * inv) << '\n';
  }
}

struct Loaded {
  std::optional<ProblemFile> problem;
  int code = kExitFeasible;
};

Loaded load(const std::string& path, std::ostream& err) {
  Loaded l;
  try {
    l.problem = load_problem(path);
  } catch (const SchemaError& e) {
    err << "schema error at " << e.what() << '\n';
    l.code = kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    l.code = kExitInput;
  }
  return l;
}

bool require_ball_cap(const Instance& inst, const char* command, std::ostream& err) {
  if (inst.generator.kind() == GeneratorSet::Kind::BallCap) return true;
  err << command << ": requires a cone (ball-cap generator)\n";
  return false;
}

}  // namespace

SolverConfig make_config(const CommandOptions& opts, Eigen::Index m) {
  SolverConfig cfg;
  if (opts.max_iter) {
    cfg.max_iter = *opts.max_iter;
    cfg.pdhg_max_iter = std::max(*opts.max_iter, cfg.pdhg_max_iter);
  }
  if (opts.tol) cfg.grad_tol = *opts.tol;
  if (opts.trace_path) cfg.trace_stride = std::max(1L, opts.trace_stride);
  if (opts.seed != 0) {
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> g;
    Vector y0(m);
    for (auto& v : y0) v = g(rng);
    cfg.y0 = y0.normalized();
  }
  return cfg;
}

int exit_code(Verdict verdict) {
  switch (verdict) {
    case Verdict::Feasible:
      return kExitFeasible;
    case Verdict::InfeasibleClosure:
    case Verdict::ExactInfeasibleEvidence:
      return kExitInfeasible;
    case Verdict::Unresolved:
      break;
  }
  return kExitUnresolved;
}

json outcome_to_json(const Outcome& o, const Normalisation& norm) {
  const double inv = 1.0 / norm.scale;
  json doc;
  doc["verdict"] = to_string(o.verdict);
  doc["x"] = optional_json(o.x, [&](const Vector& v) { return vector_json(v, inv); });
  doc["y"] = optional_json(o.y, [&](const Vector& v) { return vector_json(v, inv); });
  doc["certificate"] = optional_json(o.certificate, [](const Vector& v) { return vector_json(v); });
  doc["gap"] = optional_json(o.gap, [&](double v) { return scalar_json(v * inv * inv); });
  doc["pi"] = optional_json(o.pi, [&](double v) { return scalar_json(v * inv * inv); });
  doc["lambda_star"] = optional_json(o.lambda_star, [&](double v) { return scalar_json(v * inv); });
  doc["C_of_b"] = optional_json(o.farkas_constant, [&](double v) { return scalar_json(v * inv); });
  doc["dual_attained"] = to_string(o.dual_attained);
  doc["unique_recovery"] = o.unique_recovery;
  doc["in_original_cone"] = optional_json(o.in_original_cone, [](bool v) { return json(v); });
  doc["iterations"] = o.iterations;
  doc["normalisation"] = {{"scale", norm.scale}, {"b_norm", norm.b_norm}};
  doc["dual_status"] = to_string(o.dual_status);
  if (o.verdict == Verdict::ExactInfeasibleEvidence) {
    json ratios = json::array();
    for (const auto& [iter, r] : o.ratio_trace) ratios.push_back({iter, scalar_json(r * inv)});
    doc["ratio_trace"] = ratios;
  }
  if (!o.diagnostic.empty()) doc["diagnostic"] = o.diagnostic;
  return doc;
}

int cmd_solve(const std::string& path, const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  Loaded l = load(path, err);
  if (!l.problem) return l.code;
  const ProblemFile& pf = *l.problem;
  Outcome outcome;
  try {
    const SolverConfig cfg = make_config(opts, pf.scaled.A.rows());
    if (opts.solver == "pdhg") {
      if (!require_ball_cap(pf.scaled, "solve --solver pdhg", err)) return kExitInput;
      outcome = solve_pdhg(pf.scaled, cfg);
    } else if (opts.solver == "subgrad") {
      outcome = solve(pf.scaled, cfg);
    } else {
      err << "unknown solver '" << opts.solver << "'\n";
      return kExitInput;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NumericalError& e) {
    outcome = Outcome{};
    outcome.diagnostic = e.what();
  }
  try {
    if (opts.trace_path) write_trace(*opts.trace_path, outcome, pf.normalisation.scale);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  out << outcome_to_json(outcome, pf.normalisation).dump(2) << '\n';
  return exit_code(outcome.verdict);
}

int cmd_certify(const std::string& path, const std::vector<double>& y_in, const CommandOptions& opts,
                std::ostream& out, std::ostream& err) {
  Loaded l = load(path, err);
  if (!l.problem) return l.code;
  const Instance& inst = l.problem->original;
  const Vector y = Eigen::Map<const Vector>(y_in.data(), static_cast<Eigen::Index>(y_in.size()));
  if (y.size() != inst.A.rows()) {
    err << "certify: --y has length " << y.size() << ", expected " << inst.A.rows() << '\n';
    return kExitInput;
  }
  if (!y.allFinite() || y.norm() == 0.0) {
    err << "certify: --y must be a finite nonzero vector\n";
    return kExitInput;
  }
  const double tol = opts.tol.value_or(kCertificateTol);
  const double ny = y.norm();
  const double sigma = inst.generator.support_value(inst.A.adjoint_apply(y));
  const double nb = inst.b.norm();
  const bool ok = certificate_verify(inst, y, tol);
  json doc = {{"sigma_over_norm", sigma / ny},
              {"alignment", nb > 0.0 ? inst.b.dot(y) / (ny * nb) : 0.0},
              {"tolerance", tol},
              {"verified", ok}};
  out << doc.dump(2) << '\n';
  return ok ? kExitFeasible : kExitUnresolved;
}

int cmd_diagnose(const std::string& path, const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  Loaded l = load(path, err);
  if (!l.problem) return l.code;
  const Instance& inst = l.problem->scaled;
  if (!require_ball_cap(inst, "diagnose", err)) return kExitInput;
  const auto kind = inst.generator.cone().kind();
  if (inst.epsilon != 0.0 || (kind != Cone::Kind::NonnegativeOrthant && kind != Cone::Kind::SecondOrder)) {
    err << "diagnose: requires epsilon = 0 and an orthant or second-order cone\n";
    return kExitInput;
  }
  try {
    const Outcome o = solve_exact(inst, make_config(opts, inst.A.rows()));
    if (o.verdict == Verdict::ExactInfeasibleEvidence) {
      out << "infeasible; dual unbounded below\n";
      return kExitInfeasible;
    }
    if (o.verdict != Verdict::Feasible) {
      out << "unresolved; " << o.diagnostic << '\n';
      return kExitUnresolved;
    }
    const bool attained = o.dual_attained == DualAttainment::Yes;
    const AttainmentDiagnosis d =
        diagnose_attainment(inst.A, inst.b, inst.generator.cone(), *o.x, attained ? kFeasibleTol : kWeakFeasibleTol);
    const char* verdict = attained ? "Yes" : (d.kind == AttainmentKind::AttainedPossible ? "Suspected" : "No");
    out << to_string(d.kind) << "; dual attainment: " << verdict << '\n';
    return kExitFeasible;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NumericalError& e) {
    out << "unresolved; " << e.what() << '\n';
    return kExitUnresolved;
  }
}

int cmd_pinv(const std::string& path, const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  Loaded l = load(path, err);
  if (!l.problem) return l.code;
  const ProblemFile& pf = *l.problem;
  if (!require_ball_cap(pf.scaled, "pinv", err)) return kExitInput;
  if (pf.scaled.epsilon != 0.0) err << "pinv: ignoring epsilon\n";
  try {
    const Vector x = least_norm_pseudoinverse(pf.scaled.A, pf.scaled.b, pf.scaled.generator.cone(),
                                              make_config(opts, pf.scaled.A.rows()));
    out << vector_json(x, 1.0 / pf.normalisation.scale).dump() << '\n';
    return kExitFeasible;
  } catch (const InfeasibleError& e) {
    err << e.what() << '\n';
    return kExitInfeasible;
  } catch (const UnresolvedError& e) {
    err << e.what() << '\n';
    return kExitUnresolved;
  } catch (const NumericalError& e) {
    err << e.what() << '\n';
    return kExitUnresolved;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

namespace {

bool x_verified(const Instance& inst, const Vector& x) {
  if (!x.allFinite()) return false;
  const double residual = (inst.A.apply(x) - inst.b).norm();
  return residual <= inst.epsilon + kWeakFeasibleTol * (1.0 + inst.b.norm()) &&
         std::isfinite(inst.generator.gauge(x)) && inst.generator.cone().contains(x, kWeakFeasibleTol);
}

BenchRecord bench_one(std::uint64_t seed, long id, const CommandOptions& opts) {
  const GeneratedInstance g = bench_instance(seed, id);
  const Instance& raw = g.instance;
  BenchRecord r;
  r.id = id;
  r.regime = to_string(g.regime);
  r.cone = raw.generator.cone().kind() == Cone::Kind::NonnegativeOrthant ? "orthant" : "soc";
  r.m = raw.A.rows();
  r.n = raw.A.cols();
  r.epsilon = raw.epsilon;

  const Normalisation norm = choose_normalisation(raw.b);
  const Instance inst(raw.A, norm.scale * raw.b, raw.generator, norm.scale * raw.epsilon);
  try {
    const Outcome o = solve(inst, make_config(opts, inst.A.rows()));
    r.verdict = o.verdict;
    r.iterations = o.iterations;
    if (o.gap) r.gap = *o.gap / (norm.scale * norm.scale);
    r.x_verified = o.x && x_verified(inst, *o.x);

    std::vector<Vector> certificates;
    if (o.certificate) certificates.push_back(*o.certificate);
    if (g.planted_certificate) certificates.push_back(*g.planted_certificate);
    if (raw.generator.cone().kind() == Cone::Kind::NonnegativeOrthant) {
      const NnlsResult fit = nnls(inst.A.matrix(), inst.b, 400, 1e-12);
      const Vector residual = inst.b - inst.A.apply(fit.coefficients);
      if (residual.norm() > 1e-9) certificates.push_back(residual.normalized());
    }
    for (const auto& y : certificates) {
      r.certificate_verified = r.certificate_verified || certificate_separates(inst, y, kCertificateTol);
    }
    r.exclusivity_violation = r.x_verified && r.certificate_verified;
    r.closure_without_certificate =
        o.verdict == Verdict::InfeasibleClosure && !(o.certificate && certificate_verify(inst, *o.certificate, kCertificateTol));
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

}  // namespace

std::vector<BenchRecord> run_bench(std::uint64_t seed, long count, const CommandOptions& opts) {
  if (count < 0) throw std::invalid_argument("bench: count must be nonnegative");
  std::vector<BenchRecord> records(static_cast<std::size_t>(count));
  std::atomic<long> next{0};
  unsigned workers = opts.threads > 0 ? static_cast<unsigned>(opts.threads) : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max(1L, count))));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (long id = next++; id < count; id = next++) records[static_cast<std::size_t>(id)] = bench_one(seed, id, opts);
    });
  }
  for (auto& t : pool) t.join();
  return records;
}

int cmd_bench(const std::string& dir, std::uint64_t seed, long count, const CommandOptions& opts, std::ostream& out,
              std::ostream& err) {
  if (count < 0) {
    err << "bench: count must be nonnegative\n";
    return kExitInput;
  }
  if (!dir.empty()) {
    try {
      std::filesystem::create_directories(dir);
      for (long id = 0; id < count; ++id) {
        std::ofstream f(std::filesystem::path(dir) / ("instance_" + std::to_string(id) + ".json"));
        if (!f) throw std::runtime_error("cannot write into '" + dir + "'");
        f << instance_to_json(bench_instance(seed, id).instance).dump(2) << '\n';
      }
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kExitInput;
    }
  }

  const auto records = run_bench(seed, count, opts);
  char line[256];
  std::snprintf(line, sizeof line, "%5s %-10s %-7s %2s %2s %4s %-24s %9s %12s\n", "id", "regime", "cone", "m", "n",
                "eps", "verdict", "iters", "gap");
  out << line;
  long feasible = 0, infeasible_regime = 0, certified = 0, violations = 0, uncertified_closures = 0, errors = 0;
  std::vector<double> gaps;
  for (const auto& r : records) {
    std::snprintf(line, sizeof line, "%5ld %-10s %-7s %2ld %2ld %4.2g %-24s %9ld %12s\n", r.id, r.regime.c_str(),
                  r.cone.c_str(), static_cast<long>(r.m), static_cast<long>(r.n), r.epsilon,
                  r.error.empty() ? to_string(r.verdict) : "error", r.iterations,
                  gap_text(r.gap).c_str());
    out << line;
    feasible += r.verdict == Verdict::Feasible;
    if (r.regime == std::string("infeasible")) {
      ++infeasible_regime;
      certified += r.verdict != Verdict::Feasible && r.verdict != Verdict::Unresolved;
    }
    violations += r.exclusivity_violation;
    uncertified_closures += r.closure_without_certificate;
    errors += !r.error.empty();
    if (r.gap) gaps.push_back(std::abs(*r.gap));
  }
  std::sort(gaps.begin(), gaps.end());
  out << "instances: " << count << ", feasible verdicts: " << feasible << ", errors: " << errors << '\n';
  out << "gap |max|: " << (gaps.empty() ? std::string("-") : format17(gaps.back()))
      << ", gap |median|: " << (gaps.empty() ? std::string("-") : format17(gaps[gaps.size() / 2])) << '\n';
  out << "infeasible instances certified: " << certified << " / " << infeasible_regime << '\n';
  out << "closure verdicts without verified certificate: " << uncertified_closures << '\n';
  out << "exclusivity violations: " << violations << '\n';
  return violations == 0 && uncertified_closures == 0 ? kExitFeasible : kExitUnresolved;
}

}  // namespace conic::cli
