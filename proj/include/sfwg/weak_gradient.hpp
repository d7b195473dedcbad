#ifndef SFWG_WEAK_GRADIENT_HPP
#define SFWG_WEAK_GRADIENT_HPP

#include <Eigen/Dense>

#include "sfwg/mesh.hpp"
#include "sfwg/poly_basis.hpp"

namespace sfwg {

inline std::span<double> as_span(Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

using MatrixXld = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VectorXld = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

inline std::span<long double> as_span(VectorXld& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

/// Local unknowns of one element: the interior P_k block first, then one
/// P_k(e) block per local edge in element order.
struct LocalDofLayout {
  int k = 1;
  int num_edges = 3;

  int interior_size() const { return dim_pk(k); }
  int edge_size() const { return k + 1; }
  int edge_offset(int l) const { return interior_size() + l * edge_size(); }
  int total() const { return interior_size() + num_edges * edge_size(); }
};

/// Weak-gradient lifting of one element into [P_j(T)]^2. The gradient space
/// is ordered as the x-component block followed by the y-component block,
/// each over the scaled monomials of degree j.
struct WeakGradOp {
  int k = 1;
  int j = 1;
  LocalDofLayout layout;
  Eigen::MatrixXd gradient;   ///< G, 2 dim_pk(j) x layout.total()
  Eigen::MatrixXd mass;       ///< M, block-diagonal Gram matrix of [P_j]^2
  Eigen::MatrixXd stiffness;  ///< K = G^T M G
  /// G before rounding to double; apply() multiplies with this one.
  MatrixXld gradient_ext;
};

/// Smallest weak-gradient degree for which the energy norm controls the
/// discrete H1 norm on an m-gon.
constexpr int j_zero(int k, int m, bool parallel) { return parallel ? k + m - 3 : k + m - 2; }

/// Global degree for `--j auto`: maximum of j_zero over the elements.
int auto_degree(const Mesh& mesh, int k);

/// Assembles and solves in long double. The interior block of B is used in
/// the integrated-by-parts form (grad phi_i, q)_T - <phi_i, q.n>_dT, so
/// constants cancel exactly against the edge block.
WeakGradOp build_local_operator(const Mesh& mesh, int element, int k, int j);

Eigen::MatrixXd local_stiffness(const WeakGradOp& op);

/// Weak-gradient coefficients of a local DOF vector.
Eigen::VectorXd apply(const WeakGradOp& op, const Eigen::VectorXd& local_dofs);

}  // namespace sfwg

#endif
