#include "sfwg/assembly.hpp"

#include <algorithm>
#include <stdexcept>

#include "sfwg/poly_basis.hpp"
#include "sfwg/weak_gradient.hpp"

namespace sfwg {

DofMap::DofMap(const Mesh& mesh, int k) : k_(k) {
  if (k < 0) throw std::invalid_argument("DofMap: negative degree");
  int next = mesh.num_elements() * dim_interior();
  edge_offset_.assign(mesh.num_edges(), -1);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edge(e).boundary()) {
      num_eliminated_ += dim_edge();
    } else {
      edge_offset_[e] = next;
      next += dim_edge();
    }
  }
  num_unknowns_ = next;

  gather_start_.resize(mesh.num_elements() + 1, 0);
  for (int t = 0; t < mesh.num_elements(); ++t) {
    gather_start_[t + 1] = gather_start_[t] + dim_interior() + mesh.num_element_edges(t) * dim_edge();
  }
  gather_.reserve(gather_start_.back());
  for (int t = 0; t < mesh.num_elements(); ++t) {
    for (int i = 0; i < dim_interior(); ++i) gather_.push_back(interior_offset(t) + i);
    for (int e : mesh.element_edges(t)) {
      for (int b = 0; b < dim_edge(); ++b) gather_.push_back(edge_offset_[e] < 0 ? -1 : edge_offset_[e] + b);
    }
  }
}

SparseSpd assemble_matrix(const DofMap& dofs, std::span<const Eigen::MatrixXd> local) {
  std::size_t count = 0;
  for (const auto& m : local) count += static_cast<std::size_t>(m.size());
  std::vector<Triplet> trip;
  trip.reserve(count);
  for (std::size_t t = 0; t < local.size(); ++t) {
    const auto g = dofs.gather(static_cast<int>(t));
    const Eigen::MatrixXd& m = local[t];
    if (m.rows() != static_cast<Eigen::Index>(g.size())) {
      throw std::invalid_argument("assemble_matrix: local matrix does not match the gather list");
    }
    for (std::size_t a = 0; a < g.size(); ++a) {
      if (g[a] < 0) continue;
      for (std::size_t b = 0; b < g.size(); ++b) {
        if (g[b] >= 0) trip.push_back({g[a], g[b], m(a, b)});
      }
    }
  }
  return SparseSpd::from_triplets(dofs.num_unknowns(), trip);
}

SparseSpd assemble_stiffness(const Mesh& mesh, const DofMap& dofs, int j, Execution exec) {
  const auto local = kernels::local_stiffness_matrices(mesh, dofs.k(), j, exec);
  return assemble_matrix(dofs, local);
}

SparseSpd assemble_stiffness(const Mesh& mesh, int k, int j, Execution exec) {
  return assemble_stiffness(mesh, DofMap(mesh, k), j, exec);
}

Eigen::VectorXd assemble_load(const Mesh& mesh, const DofMap& dofs, const ScalarFunction& f,
                              int quad_degree, Execution exec) {
  const int k = dofs.k();
  const int degree = quad_degree < 0 ? 2 * k + 4 : quad_degree;
  const int n0 = dofs.dim_interior();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dofs.num_unknowns());
  // Interior blocks are disjoint per element, so each element writes its own slice.
  kernels::for_each_element(mesh.num_elements(), exec, [&](int t) {
    const ElementBasis basis(mesh.geometry(t), k);
    const QuadRule rule = polygon_quadrature(mesh, t, degree);
    Eigen::VectorXd phi(n0);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(n0);
    for (std::size_t p = 0; p < rule.points.size(); ++p) {
      basis.eval(rule.points[p], as_span(phi));
      acc += (rule.weights[p] * f(rule.points[p])) * phi;
    }
    b.segment(dofs.interior_offset(t), n0) = acc;
  });
  return b;
}

Eigen::VectorXd assemble_load(const Mesh& mesh, const DofMap& dofs, std::string_view field) {
  return assemble_load(mesh, dofs, make_field(field).source);
}

long counting_lower_bound(const Mesh& mesh, int k, int j) {
  const DofMap dofs(mesh, k);
  const long gradient_dim = 2L * dim_pk(j) * mesh.num_elements();
  return std::max(0L, static_cast<long>(dofs.num_unknowns()) - gradient_dim);
}

}  // namespace sfwg
