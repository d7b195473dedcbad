#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sfwg/analysis.hpp"
#include "sfwg/weak_gradient.hpp"

using namespace sfwg;

namespace {

Mesh reference_triangle() { return Mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}}); }

Eigen::VectorXd random_vector(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = dist(rng);
  return v;
}

// Local DOFs of the interpolant Q_h u on one element.
Eigen::VectorXd local_projection(const Mesh& mesh, int t, int k, const ScalarFunction& u) {
  return project_qh(mesh, k, u).local(mesh, t);
}

}  // namespace

TEST_CASE("j_zero") {
  CHECK(j_zero(1, 3, false) == 2);
  CHECK(j_zero(1, 4, true) == 2);
  CHECK(j_zero(1, 4, false) == 3);
  CHECK(j_zero(2, 6, true) == 5);
  CHECK(j_zero(2, 6, false) == 6);
  CHECK(auto_degree(build_uniform_triangle_mesh(3), 1) == 2);
  CHECK(auto_degree(build_uniform_quad_mesh(3), 2) == 3);
}

TEST_CASE("weak gradient matches the exact-integral oracle") {
  const Mesh mesh = reference_triangle();
  for (auto [k, j] : {std::pair{1, 2}, std::pair{1, 1}, std::pair{2, 3}, std::pair{3, 5}}) {
    const WeakGradOp op = build_local_operator(mesh, 0, k, j);
    const auto g = oracle::reference_triangle_gradient(k, j);
    REQUIRE(static_cast<int>(g.size()) == op.gradient.rows());
    REQUIRE(static_cast<int>(g[0].size()) == op.gradient.cols());
    double worst = 0.0;
    for (int r = 0; r < op.gradient.rows(); ++r) {
      for (int c = 0; c < op.gradient.cols(); ++c) {
        const double exact = static_cast<double>(g[r][c]);
        worst = std::max(worst, std::abs(op.gradient(r, c) - exact) / std::max(1.0, std::abs(exact)));
      }
    }
    // Entrywise 1e-12 at low degree; beyond that the monomial Gram matrix
    // conditioning sets the attainable accuracy.
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(op.mass).eigenvalues();
    const double cond = ev.maxCoeff() / ev.minCoeff();
    CHECK(worst <= std::max(1e-12, 1e-15 * cond));
  }
}

TEST_CASE("constants have zero weak gradient and linears are reproduced") {
  for (const Mesh& mesh : {build_uniform_triangle_mesh(2), build_hexagon_mesh(2), build_uniform_quad_mesh(2)}) {
    const int k = 1;
    const int j = auto_degree(mesh, k);
    const ScalarFunction one = [](Point2) { return 1.0; };
    const ScalarFunction lin = [](Point2 p) { return 2.0 * p.x - 3.0 * p.y; };
    for (int t = 0; t < mesh.num_elements(); ++t) {
      const WeakGradOp op = build_local_operator(mesh, t, k, j);
      const double scale = op.gradient.cwiseAbs().maxCoeff();
      CHECK(apply(op, local_projection(mesh, t, k, one)).cwiseAbs().maxCoeff() < 1e-13 * scale);
      CHECK((op.stiffness * local_projection(mesh, t, k, one)).cwiseAbs().maxCoeff() <
            1e-13 * op.stiffness.cwiseAbs().maxCoeff());

      // grad(2x - 3y) = (2, -3) is the constant mode of each component block.
      const Eigen::VectorXd g = apply(op, local_projection(mesh, t, k, lin));
      const int nq = dim_pk(j);
      Eigen::VectorXd expect = Eigen::VectorXd::Zero(2 * nq);
      expect(0) = 2.0;
      expect(nq) = -3.0;
      CHECK((g - expect).cwiseAbs().maxCoeff() < 1e-13 * scale);
    }
  }
}

TEST_CASE("local stiffness is symmetric PSD and agrees with the lifted gradient") {
  const Mesh mesh = build_hexagon_mesh(3);
  for (int k : {1, 2}) {
    const int j = auto_degree(mesh, k);
    for (int t = 0; t < mesh.num_elements(); ++t) {
      const WeakGradOp op = build_local_operator(mesh, t, k, j);
      const Eigen::MatrixXd& K = op.stiffness;
      CHECK((K - K.transpose()).cwiseAbs().maxCoeff() == 0.0);
      const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(K).eigenvalues();
      CHECK(ev.minCoeff() >= -1e-12 * ev.maxCoeff());

      // d^T K d against a quadrature of |grad_w d|^2 evaluated pointwise.
      const Eigen::VectorXd d = random_vector(op.layout.total(), 11 + t);
      const Eigen::VectorXd g = apply(op, d);
      const ElementBasis qb(mesh.geometry(t), j);
      const int nq = qb.size();
      const QuadRule rule = polygon_quadrature(mesh, t, 2 * j);
      Eigen::VectorXd phi(nq);
      double integral = 0.0;
      for (std::size_t p = 0; p < rule.points.size(); ++p) {
        qb.eval(rule.points[p], as_span(phi));
        const double gx = phi.dot(g.head(nq));
        const double gy = phi.dot(g.tail(nq));
        integral += rule.weights[p] * (gx * gx + gy * gy);
      }
      CHECK(d.dot(K * d) == doctest::Approx(integral).epsilon(1e-12));
    }
  }
}

TEST_CASE("rank of the local stiffness") {
  const Mesh hex = build_hexagon_mesh(3);
  int interior_hexagon = -1;
  for (int t = 0; t < hex.num_elements(); ++t) {
    if (hex.num_element_edges(t) == 6) interior_hexagon = t;
  }
  REQUIRE(interior_hexagon >= 0);
  // On an m-gon the local kernel is exactly the constants once j >= j_zero.
  const int m = 6;
  const int k = 1;
  const int j0 = j_zero(k, m, shape_report(hex).parallel_edges[interior_hexagon]);
  const auto rank = [&](int j) {
    const WeakGradOp op = build_local_operator(hex, interior_hexagon, k, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.stiffness);
    const double top = es.eigenvalues().maxCoeff();
    int r = 0;
    for (double v : es.eigenvalues()) r += v > 1e-10 * top ? 1 : 0;
    return r;
  };
  const int ndof = dim_pk(k) + m * (k + 1);
  CHECK(rank(k) <= 2 * dim_pk(k));
  CHECK(rank(k) < ndof - 1);
  CHECK(rank(j0) == ndof - 1);

  const Mesh tri = reference_triangle();
  const auto tri_rank = [&](int j) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(build_local_operator(tri, 0, 1, j).stiffness);
    const double top = es.eigenvalues().maxCoeff();
    int r = 0;
    for (double v : es.eigenvalues()) r += v > 1e-10 * top ? 1 : 0;
    return r;
  };
  CHECK(tri_rank(1) == 6);
  CHECK(tri_rank(2) == 8);
}

TEST_CASE("apply is linear and validates its input") {
  const Mesh mesh = build_uniform_quad_mesh(2);
  const WeakGradOp op = build_local_operator(mesh, 1, 2, 3);
  const Eigen::VectorXd a = random_vector(op.layout.total(), 1);
  const Eigen::VectorXd b = random_vector(op.layout.total(), 2);
  CHECK((apply(op, 2.0 * a - b) - (2.0 * apply(op, a) - apply(op, b))).cwiseAbs().maxCoeff() <
        1e-14 * op.gradient.cwiseAbs().maxCoeff());
  CHECK(apply(op, Eigen::VectorXd::Zero(op.layout.total())).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(apply(op, Eigen::VectorXd::Zero(op.layout.total() + 1)), std::invalid_argument);
  CHECK_THROWS_AS(build_local_operator(mesh, 0, 2, 1), std::invalid_argument);
}

TEST_CASE("polynomial consistency") {
  // For u in P_k with v_b its trace projection, grad_w Q_h u = grad u.
  for (const Mesh& mesh : {build_uniform_triangle_mesh(2), build_uniform_quad_mesh(2), build_hexagon_mesh(2)}) {
    for (int k = 1; k <= 3; ++k) {
      const ScalarFunction u = [k](Point2 p) { return std::pow(p.x, k) - 2.0 * std::pow(p.y, k - 1) * p.x + 0.5; };
      const auto grad = [k](Point2 p) {
        return Point2{k * std::pow(p.x, k - 1) - 2.0 * std::pow(p.y, k - 1),
                      k == 1 ? 0.0 : -2.0 * (k - 1) * std::pow(p.y, k - 2) * p.x};
      };
      const WgFunction qh = project_qh(mesh, k, u);
      for (int j = k; j <= k + 2; ++j) {
        double worst = 0.0;
        for (int t = 0; t < mesh.num_elements(); ++t) {
          const WeakGradOp op = build_local_operator(mesh, t, k, j);
          const Eigen::VectorXd g = apply(op, qh.local(mesh, t));
          const ElementBasis qb(mesh.geometry(t), j);
          const int nq = qb.size();
          Eigen::VectorXd phi(nq);
          for (Point2 p : {mesh.geometry(t).centroid, mesh.vertex(mesh.element(t)[0])}) {
            qb.eval(p, as_span(phi));
            const Point2 gu = grad(p);
            worst = std::max(worst, std::abs(phi.dot(g.head(nq)) - gu.x));
            worst = std::max(worst, std::abs(phi.dot(g.tail(nq)) - gu.y));
          }
        }
        CHECK(worst < 1e-10);
      }
    }
  }
}

TEST_CASE("energy grows with the weak-gradient degree") {
  const Mesh mesh = build_hexagon_mesh(2);
  const int k = 1;
  const DofMap dofs(mesh, k);
  const Eigen::VectorXd x = random_vector(dofs.num_unknowns(), 5);
  double prev = 0.0;
  for (int j = 1; j <= 5; ++j) {
    const double e = energy_norm(mesh, k, j, x);
    CHECK(e >= prev * (1.0 - 1e-12));
    prev = e;
  }
}
