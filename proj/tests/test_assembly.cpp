#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "sfwg/assembly.hpp"
#include "sfwg/poly_basis.hpp"
#include "sfwg/weak_gradient.hpp"

using namespace sfwg;

namespace {

Eigen::VectorXd random_vector(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = dist(rng);
  return v;
}

}  // namespace

TEST_CASE("DOF counts") {
  const Mesh t1 = build_uniform_triangle_mesh(1);
  CHECK(DofMap(t1, 1).num_unknowns() == 8);
  CHECK(DofMap(t1, 1).num_eliminated() == 8);

  const Mesh q2 = build_uniform_quad_mesh(2);
  const DofMap d(q2, 1);
  CHECK(d.num_unknowns() == 20);
  CHECK(d.num_eliminated() == 2 * q2.num_boundary_edges());
  for (int e = 0; e < q2.num_edges(); ++e) CHECK((d.edge_offset(e) < 0) == q2.edge(e).boundary());

  const Mesh h3 = build_hexagon_mesh(3);
  for (int k : {1, 2, 3}) {
    const DofMap dk(h3, k);
    CHECK(dk.num_unknowns() == h3.num_elements() * dim_pk(k) + h3.num_interior_edges() * (k + 1));
    for (int t = 0; t < h3.num_elements(); ++t) {
      const auto g = dk.gather(t);
      CHECK(static_cast<int>(g.size()) == dim_pk(k) + h3.num_element_edges(t) * (k + 1));
      CHECK(g[0] == dk.interior_offset(t));
    }
  }
}

TEST_CASE("single quadrilateral keeps only interior unknowns") {
  const Mesh mesh = build_uniform_quad_mesh(1);
  const DofMap dofs(mesh, 1);
  const SparseSpd a = assemble_stiffness(mesh, dofs, 2);
  REQUIRE(a.size() == 3);
  const Eigen::MatrixXd local = build_local_operator(mesh, 0, 1, 2).stiffness;
  CHECK((a.to_dense() - local.topLeftCorner(3, 3)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.to_dense().llt().info() == Eigen::Success);
}

TEST_CASE("stiffness matrix is symmetric, PSD and scatters consistently") {
  for (const Mesh& mesh : {build_uniform_triangle_mesh(4), build_hexagon_mesh(3)}) {
    const int k = 1;
    const int j = auto_degree(mesh, k);
    const DofMap dofs(mesh, k);
    const SparseSpd a = assemble_stiffness(mesh, dofs, j);
    CHECK(a.structurally_symmetric());
    CHECK(a.relative_asymmetry() <= 1e-14);
    const auto local = kernels::reference::local_stiffness_matrices(mesh, k, j);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const Eigen::VectorXd x = random_vector(a.size(), seed);
      const double global = x.dot(a.multiply(x));
      double sum = 0.0;
      for (int t = 0; t < mesh.num_elements(); ++t) {
        const auto g = dofs.gather(t);
        Eigen::VectorXd xt(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) xt(i) = g[i] < 0 ? 0.0 : x(g[i]);
        sum += xt.dot(local[t] * xt);
      }
      CHECK(global >= 0.0);
      CHECK(global == doctest::Approx(sum).epsilon(1e-12));
    }
  }
}

TEST_CASE("stiffness is SPD on triangles with j = k + 1") {
  const SparseSpd a = assemble_stiffness(build_uniform_triangle_mesh(2), 1, 2);
  CHECK(a.size() == 40);
  const Eigen::MatrixXd dense = a.to_dense();
  CHECK(dense.llt().info() == Eigen::Success);
}

TEST_CASE("load vector") {
  const Mesh mesh = build_hexagon_mesh(3);
  const DofMap dofs(mesh, 2);
  CHECK(assemble_load(mesh, dofs, [](Point2) { return 0.0; }).cwiseAbs().maxCoeff() == 0.0);

  const Eigen::VectorXd ones = assemble_load(mesh, dofs, [](Point2) { return 1.0; });
  for (int t = 0; t < mesh.num_elements(); ++t) {
    CHECK(ones(dofs.interior_offset(t)) == doctest::Approx(mesh.geometry(t).area).epsilon(1e-14));
  }
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (dofs.edge_offset(e) >= 0) CHECK(ones(dofs.edge_offset(e)) == 0.0);
  }

  const Mesh tri = build_uniform_triangle_mesh(8);
  for (int k : {1, 2}) {
    const DofMap dk(tri, k);
    const ScalarFunction f = make_field("sinsin").source;
    const Eigen::VectorXd b = assemble_load(tri, dk, "sinsin");
    const Eigen::VectorXd fine = assemble_load(tri, dk, f, 2 * k + 8);
    CHECK((b - fine).cwiseAbs().maxCoeff() <= 1e-7 * fine.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("load does not depend on the element order") {
  const Mesh mesh = build_uniform_triangle_mesh(3);
  std::vector<std::vector<int>> reversed(mesh.elements().rbegin(), mesh.elements().rend());
  const Mesh flipped(std::vector<Point2>(mesh.vertices().begin(), mesh.vertices().end()), reversed);
  const DofMap d1(mesh, 2), d2(flipped, 2);
  const ScalarFunction f = make_field("bubble").source;
  const Eigen::VectorXd b1 = assemble_load(mesh, d1, f);
  const Eigen::VectorXd b2 = assemble_load(flipped, d2, f);
  const int n = mesh.num_elements();
  for (int t = 0; t < n; ++t) {
    const Eigen::VectorXd s1 = b1.segment(d1.interior_offset(t), d1.dim_interior());
    const Eigen::VectorXd s2 = b2.segment(d2.interior_offset(n - 1 - t), d2.dim_interior());
    CHECK((s1 - s2).cwiseAbs().maxCoeff() <= 1e-16);
  }
}

TEST_CASE("counting lower bound") {
  CHECK(counting_lower_bound(build_uniform_triangle_mesh(2), 1, 2) == 0);
  // 25 squares: 75 interior + 40 interior edges * 2 = 155 unknowns, 25 * 2 * 3 = 150
  CHECK(counting_lower_bound(build_uniform_quad_mesh(5), 1, 1) == 5);
  CHECK(counting_lower_bound(build_uniform_quad_mesh(5), 1, 2) == 0);
  for (int n : {2, 3, 4}) {
    const Mesh hex = build_hexagon_mesh(n);
    const long expect = std::max(0L, static_cast<long>(DofMap(hex, 1).num_unknowns()) - 6L * hex.num_elements());
    CHECK(counting_lower_bound(hex, 1, 1) == expect);
  }
  CHECK(counting_lower_bound(build_hexagon_mesh(2), 1, 1) == 0);
  CHECK(counting_lower_bound(build_hexagon_mesh(3), 1, 1) == 8);
}
