#include "sfwg/poly_basis.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>

namespace sfwg {

std::vector<std::pair<int, int>> monomial_exponents(int k) {
  std::vector<std::pair<int, int>> exps;
  exps.reserve(dim_pk(k));
  for (int d = 0; d <= k; ++d) {
    for (int b = 0; b <= d; ++b) exps.emplace_back(d - b, b);
  }
  return exps;
}

ElementBasis::ElementBasis(Point2 center, double scale, int degree)
    : center_(center), scale_(scale), degree_(degree), exponents_(monomial_exponents(degree)) {
  if (degree < 0 || degree > kMaxDegree) {
    throw std::invalid_argument("ElementBasis: degree out of range");
  }
  if (!(scale > 0.0)) throw std::invalid_argument("ElementBasis: scale must be positive");
}

void ElementBasis::eval(Point2 p, std::span<double> values) const {
  std::array<double, kMaxDegree + 1> up, vp;
  up[0] = vp[0] = 1.0;
  const double u = (p.x - center_.x) / scale_;
  const double v = (p.y - center_.y) / scale_;
  for (int i = 1; i <= degree_; ++i) {
    up[i] = up[i - 1] * u;
    vp[i] = vp[i - 1] * v;
  }
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    values[i] = up[exponents_[i].first] * vp[exponents_[i].second];
  }
}

template <typename T>
void ElementBasis::eval_impl(Point2 p, std::span<T> values, std::span<T> dx, std::span<T> dy) const {
  std::array<T, kMaxDegree + 1> up, vp;
  up[0] = vp[0] = 1;
  const T u = (T(p.x) - T(center_.x)) / T(scale_);
  const T v = (T(p.y) - T(center_.y)) / T(scale_);
  for (int i = 1; i <= degree_; ++i) {
    up[i] = up[i - 1] * u;
    vp[i] = vp[i - 1] * v;
  }
  const T inv = T(1) / T(scale_);
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    const auto [a, b] = exponents_[i];
    values[i] = up[a] * vp[b];
    dx[i] = a > 0 ? a * up[a - 1] * vp[b] * inv : T(0);
    dy[i] = b > 0 ? b * up[a] * vp[b - 1] * inv : T(0);
  }
}

void ElementBasis::eval(Point2 p, std::span<double> values, std::span<double> dx,
                        std::span<double> dy) const {
  eval_impl(p, values, dx, dy);
}

void ElementBasis::eval(Point2 p, std::span<long double> values, std::span<long double> dx,
                        std::span<long double> dy) const {
  eval_impl(p, values, dx, dy);
}

EdgeBasis::EdgeBasis(Point2 from, Point2 to, int degree)
    : midpoint_(0.5 * (from + to)), length_(norm(to - from)), degree_(degree) {
  if (degree < 0) throw std::invalid_argument("EdgeBasis: negative degree");
  tangent_ = (1.0 / length_) * (to - from);
}

void EdgeBasis::eval_parameter(double s, std::span<double> values) const {
  values[0] = 1.0;
  for (int a = 1; a <= degree_; ++a) values[a] = values[a - 1] * s;
}

void EdgeBasis::eval_parameter(long double s, std::span<long double> values) const {
  values[0] = 1.0L;
  for (int a = 1; a <= degree_; ++a) values[a] = values[a - 1] * s;
}

QuadRule1D gauss_jacobi(int npoints, double alpha, double beta) {
  if (npoints < 1) throw std::invalid_argument("gauss_jacobi: need at least one point");
  // Monic three-term recurrence of the Jacobi polynomials.
  Eigen::VectorXd diag(npoints);
  Eigen::VectorXd sub(std::max(npoints - 1, 1));
  const double ab = alpha + beta;
  for (int n = 0; n < npoints; ++n) {
    const double s = 2.0 * n + ab;
    diag(n) = (n == 0) ? (beta - alpha) / (ab + 2.0) : (beta * beta - alpha * alpha) / (s * (s + 2.0));
  }
  for (int n = 1; n < npoints; ++n) {
    const double s = 2.0 * n + ab;
    const double num = 4.0 * n * (n + alpha) * (n + beta) * (n + ab);
    const double den = s * s * (s + 1.0) * (s - 1.0);
    sub(n - 1) = std::sqrt(num / den);
  }
  const double mu0 = std::pow(2.0, ab + 1.0) * std::tgamma(alpha + 1.0) * std::tgamma(beta + 1.0) /
                     std::tgamma(ab + 2.0);

  QuadRule1D rule;
  rule.degree = 2 * npoints - 1;
  rule.points.resize(npoints);
  rule.weights.resize(npoints);
  if (npoints == 1) {
    rule.points[0] = diag(0);
    rule.weights[0] = mu0;
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub.head(npoints - 1), Eigen::ComputeEigenvectors);
  for (int i = 0; i < npoints; ++i) {
    rule.points[i] = eig.eigenvalues()(i);
    const double v0 = eig.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

QuadRule1D edge_quadrature(int degree) {
  if (degree < 0) throw std::invalid_argument("edge_quadrature: negative degree");
  const int np = (degree + 2) / 2;
  QuadRule1D rule = gauss_jacobi(np, 0.0, 0.0);
  for (int i = 0; i < np; ++i) {
    rule.points[i] = 0.5 * (rule.points[i] + 1.0);
    rule.weights[i] *= 0.5;
  }
  rule.degree = degree;
  return rule;
}

QuadRule triangle_quadrature(int degree) {
  if (degree < 0) throw std::invalid_argument("triangle_quadrature: negative degree");
  const int np = (degree + 2) / 2;
  // x = u, y = v (1 - u); the Jacobian (1 - u) is absorbed by a Gauss-Jacobi(1, 0) rule in u.
  const QuadRule1D gu = gauss_jacobi(np, 1.0, 0.0);
  const QuadRule1D gv = gauss_jacobi(np, 0.0, 0.0);
  QuadRule rule;
  rule.degree = degree;
  rule.points.reserve(np * np);
  rule.weights.reserve(np * np);
  for (int i = 0; i < np; ++i) {
    const double u = 0.5 * (gu.points[i] + 1.0);
    const double wu = 0.25 * gu.weights[i];
    for (int j = 0; j < np; ++j) {
      const double v = 0.5 * (gv.points[j] + 1.0);
      rule.points.push_back({u, v * (1.0 - u)});
      rule.weights.push_back(wu * 0.5 * gv.weights[j]);
    }
  }
  return rule;
}

QuadRule map_triangle_rule(const QuadRule& ref, Point2 a, Point2 b, Point2 c) {
  const Point2 e1 = b - a;
  const Point2 e2 = c - a;
  const double jac = std::abs(cross(e1, e2));
  QuadRule rule;
  rule.degree = ref.degree;
  rule.points.reserve(ref.points.size());
  rule.weights.reserve(ref.weights.size());
  for (std::size_t q = 0; q < ref.points.size(); ++q) {
    const Point2 r = ref.points[q];
    rule.points.push_back(a + r.x * e1 + r.y * e2);
    rule.weights.push_back(ref.weights[q] * jac);
  }
  return rule;
}

QuadRule polygon_quadrature(const Mesh& mesh, int element, int degree) {
  const QuadRule ref = triangle_quadrature(degree);
  const auto cycle = mesh.element(element);
  const int m = static_cast<int>(cycle.size());
  if (m == 3) {
    return map_triangle_rule(ref, mesh.vertex(cycle[0]), mesh.vertex(cycle[1]), mesh.vertex(cycle[2]));
  }
  const Point2 c = mesh.geometry(element).centroid;
  QuadRule rule;
  rule.degree = degree;
  rule.points.reserve(m * ref.points.size());
  rule.weights.reserve(m * ref.points.size());
  for (int l = 0; l < m; ++l) {
    QuadRule sub = map_triangle_rule(ref, c, mesh.vertex(cycle[l]), mesh.vertex(cycle[(l + 1) % m]));
    rule.points.insert(rule.points.end(), sub.points.begin(), sub.points.end());
    rule.weights.insert(rule.weights.end(), sub.weights.begin(), sub.weights.end());
  }
  return rule;
}

}  // namespace sfwg
