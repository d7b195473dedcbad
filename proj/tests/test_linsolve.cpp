#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "sfwg/assembly.hpp"
#include "sfwg/error.hpp"
#include "sfwg/linsolve.hpp"

using namespace sfwg;

TEST_CASE("CG on small systems") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(5, 5);
  d.diagonal() << 1, 2, 3, 4, 5;
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(5);
  const SolveResult diag = cg_solve(SparseSpd::from_dense(d), b);
  CHECK(diag.stats.converged());
  CHECK(diag.stats.iterations == 1);
  CHECK(diag.x(4) == doctest::Approx(0.2));

  Eigen::MatrixXd m(2, 2);
  m << 4, 1, 1, 3;
  const SolveResult two = cg_solve(SparseSpd::from_dense(m), Eigen::Vector2d(1, 2));
  CHECK(two.stats.converged());
  CHECK(two.x(0) == doctest::Approx(1.0 / 11).epsilon(1e-12));
  CHECK(two.x(1) == doctest::Approx(7.0 / 11).epsilon(1e-12));

  const SolveResult zero = cg_solve(SparseSpd::from_dense(m), Eigen::Vector2d::Zero());
  CHECK(zero.stats.converged());
  CHECK(zero.x.norm() == 0.0);
}

TEST_CASE("CG on an assembled system") {
  const Mesh mesh = build_uniform_triangle_mesh(8);
  const DofMap dofs(mesh, 1);
  const SparseSpd a = assemble_stiffness(mesh, dofs, 2);
  const Eigen::VectorXd b = assemble_load(mesh, dofs, "sinsin");
  const SolveResult r = cg_solve(a, b, 1e-10, 20000);
  CHECK(r.stats.converged());
  CHECK(r.stats.iterations < 5000);
  CHECK(r.stats.residual <= 1e-10);
  CHECK((b - a.multiply(r.x)).norm() / b.norm() == doctest::Approx(r.stats.residual).epsilon(1e-6));

  const SolveResult serial = cg_solve(a, b, 1e-10, 20000, Execution::serial);
  CHECK((serial.x - r.x).norm() <= 1e-8 * r.x.norm());

  const SolveResult capped = cg_solve(a, b, 1e-10, 3);
  CHECK(capped.stats.status == SolveStatus::max_iterations);
  CHECK(capped.stats.iterations == 3);

  // The A-norm error decreases as iterations are added.
  double prev = INFINITY;
  for (int it : {1, 2, 4, 8, 16, 32}) {
    const Eigen::VectorXd e = cg_solve(a, b, 1e-14, it).x - r.x;
    const double err = std::sqrt(e.dot(a.multiply(e)));
    CHECK(err <= prev);
    prev = err;
  }
}

TEST_CASE("CG input validation") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(3, 3);
  const SparseSpd a = SparseSpd::from_dense(m);
  CHECK_THROWS_AS(cg_solve(a, Eigen::VectorXd::Ones(4)), std::invalid_argument);
  Eigen::VectorXd bad = Eigen::VectorXd::Ones(3);
  bad(1) = NAN;
  CHECK_THROWS_AS(cg_solve(a, bad), NumericalError);

  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1, 0, 0, -1;
  const SolveResult r = cg_solve(SparseSpd::from_dense(indefinite), Eigen::Vector2d(1, 1));
  CHECK_FALSE(r.stats.converged());
}

TEST_CASE("nullity probe") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Identity(4, 4);
  d(2, 2) = 7;
  CHECK(nullity_probe(SparseSpd::from_dense(d)).nullity == 0);

  Eigen::Vector3d v(1, -2, 0.5);
  const Eigen::MatrixXd rank1 = v * v.transpose();
  const NullityReport r = nullity_probe(SparseSpd::from_dense(rank1));
  CHECK(r.nullity == 2);
  CHECK(r.dense);
  REQUIRE(r.null_vectors.cols() == 2);
  CHECK((rank1 * r.null_vectors).cwiseAbs().maxCoeff() < 1e-12);

  const NullityReport sparse = nullity_probe(SparseSpd::from_dense(rank1), 1e-10, 0);
  CHECK_FALSE(sparse.dense);
  CHECK(sparse.nullity == 2);
}

TEST_CASE("sparse and dense probes agree on assembled matrices") {
  for (int j : {1, 2}) {
    const Mesh mesh = build_uniform_quad_mesh(5);
    const SparseSpd a = assemble_stiffness(mesh, 1, j);
    const NullityReport dense = nullity_probe(a);
    const NullityReport sparse = nullity_probe(a, 1e-10, 0);
    CHECK(dense.nullity == sparse.nullity);
    CHECK(dense.nullity == (j == 1 ? 50 : 0));
    if (dense.nullity > 0) {
      const Eigen::MatrixXd ad = a.to_dense();
      CHECK((ad * dense.null_vectors).cwiseAbs().maxCoeff() < 1e-8 * ad.cwiseAbs().maxCoeff());
      // The kernel basis has full column rank.
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(dense.null_vectors);
      CHECK(svd.singularValues().minCoeff() > 1e-6);
    }
  }
}

TEST_CASE("probe size limit") {
  const Mesh mesh = build_uniform_triangle_mesh(60);
  const SparseSpd a = assemble_stiffness(mesh, 1, 2);
  REQUIRE(a.size() > kProbeLimit);
  CHECK_THROWS_AS(nullity_probe(a), NumericalError);
}
