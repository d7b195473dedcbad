#include "sfwg/weak_gradient.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "sfwg/error.hpp"

namespace sfwg {

int auto_degree(const Mesh& mesh, int k) {
  const ShapeReport shape = shape_report(mesh);
  int j = k;
  for (int t = 0; t < mesh.num_elements(); ++t) {
    j = std::max(j, j_zero(k, mesh.num_element_edges(t), shape.parallel_edges[t]));
  }
  return j;
}

WeakGradOp build_local_operator(const Mesh& mesh, int element, int k, int j) {
  if (k < 0 || j < k) throw std::invalid_argument("build_local_operator: requires 0 <= k <= j");

  const ElementGeom& geom = mesh.geometry(element);
  const int m = mesh.num_element_edges(element);

  WeakGradOp op;
  op.k = k;
  op.j = j;
  op.layout = LocalDofLayout{k, m};

  const ElementBasis vbasis(geom, k);
  const ElementBasis qbasis(geom, j);
  const int n0 = vbasis.size();
  const int nq = qbasis.size();
  const int ndof = op.layout.total();

  MatrixXld gram = MatrixXld::Zero(nq, nq);
  // rhs(a, i): x-component rows [0, nq), y-component rows [nq, 2 nq)
  MatrixXld rhs = MatrixXld::Zero(2 * nq, ndof);

  // (grad v0, q)_T and the Gram matrix; integrands have degree <= 2j.
  const QuadRule rule = polygon_quadrature(mesh, element, 2 * j);
  VectorXld phi(nq), dphix(nq), dphiy(nq), v(n0), dvx(n0), dvy(n0);
  for (std::size_t p = 0; p < rule.points.size(); ++p) {
    const long double w = rule.weights[p];
    qbasis.eval(rule.points[p], as_span(phi), as_span(dphix), as_span(dphiy));
    vbasis.eval(rule.points[p], as_span(v), as_span(dvx), as_span(dvy));
    gram.noalias() += w * phi * phi.transpose();
    rhs.topLeftCorner(nq, n0).noalias() += w * phi * dvx.transpose();
    rhs.bottomLeftCorner(nq, n0).noalias() += w * phi * dvy.transpose();
  }

  // <v_b - v0, q.n>_{dT}; integrands have degree k + j.
  const QuadRule1D erule = edge_quadrature(k + j);
  VectorXld psi(k + 1);
  for (int l = 0; l < m; ++l) {
    const Edge& e = mesh.edge(mesh.element_edges(element)[l]);
    const Point2 a = mesh.vertex(e.vertices[0]);
    const Point2 b = mesh.vertex(e.vertices[1]);
    const EdgeBasis ebasis(a, b, k);
    const Point2 n = geom.normal[l];
    const int off = op.layout.edge_offset(l);
    for (std::size_t p = 0; p < erule.points.size(); ++p) {
      const double s = erule.points[p];
      const long double w = static_cast<long double>(erule.weights[p]) * ebasis.length();
      const Point2 x = a + s * (b - a);
      qbasis.eval(x, as_span(phi), as_span(dphix), as_span(dphiy));
      vbasis.eval(x, as_span(v), as_span(dvx), as_span(dvy));
      ebasis.eval_parameter(static_cast<long double>(s) - 0.5L, as_span(psi));
      const long double wx = w * n.x;
      const long double wy = w * n.y;
      rhs.block(0, off, nq, k + 1).noalias() += wx * phi * psi.transpose();
      rhs.block(nq, off, nq, k + 1).noalias() += wy * phi * psi.transpose();
      rhs.topLeftCorner(nq, n0).noalias() -= wx * phi * v.transpose();
      rhs.bottomLeftCorner(nq, n0).noalias() -= wy * phi * v.transpose();
    }
  }

  const Eigen::LLT<MatrixXld> chol(gram);
  if (chol.info() != Eigen::Success) {
    throw NumericalError("element " + std::to_string(element) + ": singular P_" +
                         std::to_string(j) + " Gram matrix");
  }
  op.gradient_ext.resize(2 * nq, ndof);
  op.gradient_ext.topRows(nq) = chol.solve(rhs.topRows(nq));
  op.gradient_ext.bottomRows(nq) = chol.solve(rhs.bottomRows(nq));
  op.gradient = op.gradient_ext.cast<double>();

  op.mass = Eigen::MatrixXd::Zero(2 * nq, 2 * nq);
  op.mass.topLeftCorner(nq, nq) = gram.cast<double>();
  op.mass.bottomRightCorner(nq, nq) = op.mass.topLeftCorner(nq, nq);

  // K = G^T M G = B^T G, evaluated before rounding.
  const MatrixXld kx = rhs.topRows(nq).transpose() * op.gradient_ext.topRows(nq);
  const MatrixXld ky = rhs.bottomRows(nq).transpose() * op.gradient_ext.bottomRows(nq);
  const MatrixXld kl = kx + ky;
  op.stiffness = (0.5L * (kl + kl.transpose())).cast<double>();
  return op;
}

Eigen::MatrixXd local_stiffness(const WeakGradOp& op) {
  Eigen::MatrixXd k = op.gradient.transpose() * (op.mass * op.gradient);
  return 0.5 * (k + k.transpose());
}

Eigen::VectorXd apply(const WeakGradOp& op, const Eigen::VectorXd& local_dofs) {
  if (local_dofs.size() != op.gradient.cols()) {
    throw std::invalid_argument("apply: expected " + std::to_string(op.gradient.cols()) +
                                " local DOFs, got " + std::to_string(local_dofs.size()));
  }
  if (op.gradient_ext.size() == 0) return op.gradient * local_dofs;
  return (op.gradient_ext * local_dofs.cast<long double>()).cast<double>();
}

}  // namespace sfwg
