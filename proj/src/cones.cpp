#include "conic/cones.hpp"

#include "conic/nnls.hpp"

#include <cmath>
#include <string>

namespace conic {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Matrix stack_columns(const std::vector<Vector>& vectors, const char* what) {
  if (vectors.empty()) throw std::invalid_argument(std::string(what) + ": empty vector list");
  const Eigen::Index n = vectors.front().size();
  if (n == 0) throw std::invalid_argument(std::string(what) + ": zero-dimensional vectors");
  Matrix m(n, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    require_dim(vectors[j].size(), n, what);
    require_finite(vectors[j], what);
    m.col(static_cast<Eigen::Index>(j)) = vectors[j];
  }
  return m;
}

}  // namespace

void project_second_order(double alpha, const Eigen::Ref<const Vector>& x, Eigen::Ref<Vector> out) {
  const Eigen::Index n = x.size() - 1;
  const double t = x(n);
  const double r = x.head(n).norm();
  if (r <= alpha * t) {
    out = x;
    return;
  }
  if (alpha * r <= -t) {
    out.setZero();
    return;
  }
  // Nearest point on the boundary ray through (x_head / r, 1/alpha) direction.
  const double c = (alpha * r + t) / (1.0 + alpha * alpha);
  out.head(n) = (alpha * c / r) * x.head(n);
  out(n) = c;
}

Cone Cone::orthant(Eigen::Index dim) {
  if (dim <= 0) throw std::invalid_argument("orthant: dimension must be positive");
  return Cone(Orthant{dim}, dim);
}

Cone Cone::second_order(Eigen::Index dim, double alpha) {
  if (dim <= 0) throw std::invalid_argument("second_order: dimension must be positive");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("second_order: alpha must be positive and finite");
  }
  return Cone(SecondOrder{dim, alpha}, dim);
}

Cone Cone::subspace(const std::vector<Vector>& basis) {
  const Matrix b = stack_columns(basis, "subspace");
  if (b.cols() > b.rows()) throw std::invalid_argument("subspace: more basis vectors than dimension");
  Eigen::ColPivHouseholderQR<Matrix> qr(b);
  qr.setThreshold(1e-12);
  if (qr.rank() != b.cols()) throw std::invalid_argument("subspace: basis vectors are linearly dependent");
  Matrix q = qr.householderQ() * Matrix::Identity(b.rows(), b.cols());
  return Cone(Subspace{std::move(q)}, b.rows());
}

Cone Cone::full_space(Eigen::Index dim) {
  if (dim <= 0) throw std::invalid_argument("full_space: dimension must be positive");
  return Cone(Subspace{Matrix::Identity(dim, dim)}, dim);
}

Cone Cone::rays(const std::vector<Vector>& generators) {
  Matrix r = stack_columns(generators, "rays");
  return Cone(Rays{std::move(r)}, generators.front().size());
}

Cone Cone::product(std::vector<Cone> blocks) {
  if (blocks.empty()) throw std::invalid_argument("product: no blocks");
  Eigen::Index dim = 0;
  for (const auto& b : blocks) dim += b.dim();
  return Cone(Product{std::move(blocks)}, dim);
}

Cone::Kind Cone::kind() const noexcept {
  return std::visit(Overloaded{
                        [](const Orthant&) { return Kind::NonnegativeOrthant; },
                        [](const SecondOrder&) { return Kind::SecondOrder; },
                        [](const Subspace&) { return Kind::Subspace; },
                        [](const Rays&) { return Kind::PolyhedralRays; },
                        [](const Product&) { return Kind::Product; },
                    },
                    shape_);
}

double Cone::alpha() const {
  if (const auto* soc = std::get_if<SecondOrder>(&shape_)) return soc->alpha;
  throw std::logic_error("alpha: not a second-order cone");
}

void Cone::project_to(const Eigen::Ref<const Vector>& x, Eigen::Ref<Vector> out) const {
  require_dim(x.size(), dim_, "Cone::project");
  std::visit(Overloaded{
                 [&](const Orthant&) { out = x.cwiseMax(0.0); },
                 [&](const SecondOrder& s) { project_second_order(s.alpha, x, out); },
                 [&](const Subspace& s) { out.noalias() = s.basis * (s.basis.transpose() * x); },
                 [&](const Rays& s) {
                   const int cap = kRaysIterationsPerRay * static_cast<int>(s.rays.cols());
                   const NnlsResult res = nnls(s.rays, x, cap, kRaysTolerance);
                   if (!res.converged) {
                     throw NumericalError("ray cone projection did not converge", res.kkt_violation);
                   }
                   out.noalias() = s.rays * res.coefficients;
                 },
                 [&](const Product& p) {
                   Eigen::Index offset = 0;
                   for (const auto& block : p.blocks) {
                     block.project_to(x.segment(offset, block.dim()), out.segment(offset, block.dim()));
                     offset += block.dim();
                   }
                 },
             },
             shape_);
}

Vector Cone::project(const Vector& x) const {
  require_dim(x.size(), dim_, "Cone::project");
  Vector out(dim_);
  project_to(x, out);
  return out;
}

MoreauPair Cone::moreau_decompose(const Vector& x) const {
  Vector plus = project(x);
  Vector minus = x - plus;
  return {std::move(plus), std::move(minus)};
}

bool Cone::contains(const Vector& x, double tol) const {
  if (tol < 0.0) throw std::invalid_argument("contains: negative tolerance");
  return (x - project(x)).norm() <= tol;
}

bool Cone::polar_contains(const Vector& z, double tol) const {
  if (tol < 0.0) throw std::invalid_argument("polar_contains: negative tolerance");
  return project(z).norm() <= tol;
}

}  // namespace conic
