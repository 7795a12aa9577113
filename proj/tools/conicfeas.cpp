#include "conic/cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace conic::cli;
  CLI::App app{"Conic linear feasibility: find x in cone(K) with ||Ax - b|| <= epsilon"};
  app.require_subcommand(1);

  CommandOptions opts;
  std::string trace_path;
  long max_iter = 0;
  double tol = 0.0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--max-iter", max_iter, "Dual iteration cap")->check(CLI::PositiveNumber);
    sub->add_option("--tol", tol, "Stationarity tolerance (certify: certificate tolerance)")->check(CLI::PositiveNumber);
    sub->add_option("--seed", opts.seed, "Random dual start (0 = origin); bench instance seed");
  };

  std::string path;
  auto* solve = app.add_subcommand("solve", "Solve a problem file and print the outcome as JSON");
  solve->add_option("problem", path, "Problem file")->required();
  solve->add_option("--trace", trace_path, "Write iter,J_value,y_norm,subgrad_norm rows to this CSV");
  solve->add_option("--trace-stride", opts.trace_stride, "Iterations between trace rows")->check(CLI::PositiveNumber);
  solve->add_option("--solver", opts.solver, "Dual method")->check(CLI::IsMember({"subgrad", "pdhg"}));
  add_common(solve);

  std::vector<double> y;
  auto* certify = app.add_subcommand("certify", "Check an infeasibility certificate");
  certify->add_option("problem", path, "Problem file")->required();
  certify->add_option("--y", y, "Certificate, comma separated")->required()->delimiter(',');
  add_common(certify);

  auto* diagnose = app.add_subcommand("diagnose", "Report dual attainment through shared normal vectors");
  diagnose->add_option("problem", path, "Problem file")->required();
  add_common(diagnose);

  auto* pinv = app.add_subcommand("pinv", "Least-norm solution of Ax = b over the cone");
  pinv->add_option("problem", path, "Problem file")->required();
  add_common(pinv);

  std::string dir;
  long count = 100;
  auto* bench = app.add_subcommand("bench", "Solve seeded random instances and check the Farkas alternative");
  bench->add_option("--dir", dir, "Also write the generated instances here");
  bench->add_option("--count", count, "Number of instances")->check(CLI::NonNegativeNumber);
  bench->add_option("--threads", opts.threads, "Worker threads (0 = all cores)");
  add_common(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }
  if (!trace_path.empty()) opts.trace_path = trace_path;
  if (max_iter > 0) opts.max_iter = max_iter;
  if (tol > 0.0) opts.tol = tol;

  if (solve->parsed()) return cmd_solve(path, opts, std::cout, std::cerr);
  if (certify->parsed()) return cmd_certify(path, y, opts, std::cout, std::cerr);
  if (diagnose->parsed()) return cmd_diagnose(path, opts, std::cout, std::cerr);
  if (pinv->parsed()) return cmd_pinv(path, opts, std::cout, std::cerr);
  return cmd_bench(dir, opts.seed, count, opts, std::cout, std::cerr);
}
