#include "conic/cli/instance_gen.hpp"

#include <cmath>

namespace conic::cli {

namespace {

Vector gaussian(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (auto& vi : v) vi = g(rng);
  return v;
}

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Vector interior_point(std::mt19937_64& rng, ConeFamily family, Eigen::Index n) {
  if (family == ConeFamily::Orthant) {
    Vector x(n);
    for (auto& xi : x) xi = uniform(rng, 0.2, 1.5);
    return x;
  }
  Vector x(n);
  x.head(n - 1) = gaussian(rng, n - 1);
  x.head(n - 1) *= uniform(rng, 0.0, 0.8) / std::max(x.head(n - 1).norm(), 1e-12);
  x(n - 1) = 1.0;
  return x * uniform(rng, 0.5, 1.5);
}

// A pair (q, x0) with q in the polar cone, x0 in the cone and <q, x0> = 0.
// With `strict`, q lies in the interior of the polar cone and x0 = 0 is not
// forced; otherwise both sit on the boundary.
std::pair<Vector, Vector> polar_pair(std::mt19937_64& rng, ConeFamily family, Eigen::Index n, bool strict) {
  Vector q(n), x0(n);
  if (family == ConeFamily::Orthant) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool active = strict || i == 0 || uniform(rng, 0.0, 1.0) < 0.5;
      q(i) = active ? -uniform(rng, 0.3, 1.5) : 0.0;
      x0(i) = active ? (strict ? uniform(rng, 0.0, 1.0) : 0.0) : uniform(rng, 0.2, 1.5);
    }
    if (!strict && (q.array() == 0.0).count() == 0) x0.setZero();
    return {q, x0};
  }
  // SOC(1): polar is {(u, s) : s <= -||u||}.
  Vector u = gaussian(rng, n - 1);
  while (u.norm() < 1e-3) u = gaussian(rng, n - 1);
  const double nu = u.norm();
  q.head(n - 1) = u;
  q(n - 1) = strict ? -(nu + uniform(rng, 0.3, 1.0)) : -nu;
  if (strict) {
    x0 = interior_point(rng, family, n);
  } else {
    const double t = uniform(rng, 0.5, 1.5);
    x0.head(n - 1) = t * u / nu;
    x0(n - 1) = t;
  }
  return {q, x0};
}

GeneratedInstance draw_instance(std::mt19937_64& rng, Regime regime, ConeFamily family, Eigen::Index m,
                                Eigen::Index n, double epsilon);

}  // namespace

const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::Feasible:
      return "feasible";
    case Regime::Boundary:
      return "boundary";
    case Regime::Infeasible:
      return "infeasible";
  }
  return "?";
}

GeneratedInstance generate_instance(std::mt19937_64& rng, Regime regime, ConeFamily family, Eigen::Index m,
                                    Eigen::Index n, double epsilon) {
  // Redraw near-cancelling draws with ||b|| << ||x0||; they make C(b) huge.
  for (int attempt = 0;; ++attempt) {
    GeneratedInstance g = draw_instance(rng, regime, family, m, n, epsilon);
    if (!g.planted_x || attempt >= 100 || g.instance.b.norm() >= 0.1 * g.planted_x->norm()) return g;
  }
}

namespace {

GeneratedInstance draw_instance(std::mt19937_64& rng, Regime regime, ConeFamily family, Eigen::Index m,
                                Eigen::Index n, double epsilon) {
  if (m < 1 || n < 1 || epsilon < 0.0) throw std::invalid_argument("generate_instance: bad sizes");
  if (family == ConeFamily::SecondOrder && n < 2) throw std::invalid_argument("generate_instance: SOC needs n >= 2");
  Matrix a = Matrix::NullaryExpr(m, n, [&] { return std::normal_distribution<double>()(rng); });
  const GeneratorSet gen = GeneratorSet::ball_cap(family == ConeFamily::Orthant ? Cone::orthant(n)
                                                                                 : Cone::second_order(n, 1.0));
  if (regime == Regime::Feasible) {
    const Vector x0 = interior_point(rng, family, n);
    return {Instance(LinearMap(a), a * x0, gen, epsilon), regime, x0, std::nullopt};
  }

  auto [q, x0] = polar_pair(rng, family, n, regime == Regime::Infeasible);
  Vector y0 = gaussian(rng, m).normalized();
  a += y0 * (q - a.transpose() * y0).transpose();  // now A^T y0 = q
  Vector b = a * x0;
  if (regime == Regime::Boundary) {
    return {Instance(LinearMap(a), b, gen, epsilon), regime, x0, std::nullopt};
  }
  const double delta = uniform(rng, 0.2, 1.0);
  b += (epsilon + delta - b.dot(y0)) * y0;
  return {Instance(LinearMap(a), b, gen, epsilon), regime, std::nullopt, y0};
}

}  // namespace

GeneratedInstance bench_instance(std::uint64_t seed, long id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id), 0x0b5eu};
  std::mt19937_64 rng(seq);
  const auto regime = static_cast<Regime>(id % 3);
  const double epsilon = (id / 3) % 2 == 0 ? 0.0 : 0.1;
  const ConeFamily family = uniform(rng, 0.0, 1.0) < 0.5 ? ConeFamily::Orthant : ConeFamily::SecondOrder;
  const auto m = static_cast<Eigen::Index>(std::uniform_int_distribution<int>(2, 5)(rng));
  const auto n = static_cast<Eigen::Index>(std::uniform_int_distribution<int>(2, 6)(rng));
  return generate_instance(rng, regime, family, m, n, epsilon);
}

}  // namespace conic::cli
