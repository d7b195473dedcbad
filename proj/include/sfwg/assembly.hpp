#ifndef SFWG_ASSEMBLY_HPP
#define SFWG_ASSEMBLY_HPP

#include <Eigen/Dense>
#include <span>
#include <string_view>
#include <vector>

#include "sfwg/fields.hpp"
#include "sfwg/kernels.hpp"
#include "sfwg/mesh.hpp"
#include "sfwg/sparse.hpp"

namespace sfwg {

/// Global numbering of the unknowns of V_h^0: all interior P_k blocks (element
/// order), then the P_k(e) blocks of the interior edges (edge order). Boundary
/// edges carry v_b = 0 and have no unknowns.
class DofMap {
public:
  DofMap(const Mesh& mesh, int k);

  int k() const { return k_; }
  int num_unknowns() const { return num_unknowns_; }
  /// Local slots dropped by the Dirichlet elimination, summed over the mesh edges.
  int num_eliminated() const { return num_eliminated_; }
  int interior_offset(int element) const { return element * dim_interior(); }
  /// First global index of an edge block, -1 for boundary edges.
  int edge_offset(int edge) const { return edge_offset_[edge]; }
  /// Local slot -> global unknown, -1 for eliminated slots.
  std::span<const int> gather(int element) const {
    return {gather_.data() + gather_start_[element],
            static_cast<std::size_t>(gather_start_[element + 1] - gather_start_[element])};
  }

  int dim_interior() const { return (k_ + 1) * (k_ + 2) / 2; }
  int dim_edge() const { return k_ + 1; }

private:
  int k_;
  int num_unknowns_ = 0;
  int num_eliminated_ = 0;
  std::vector<int> edge_offset_;
  std::vector<int> gather_start_;
  std::vector<int> gather_;
};

/// Scatters per-element matrices over the non-eliminated slots, element by element.
SparseSpd assemble_matrix(const DofMap& dofs, std::span<const Eigen::MatrixXd> local);

SparseSpd assemble_stiffness(const Mesh& mesh, const DofMap& dofs, int j,
                             Execution exec = Execution::parallel);
SparseSpd assemble_stiffness(const Mesh& mesh, int k, int j, Execution exec = Execution::parallel);

/// Entries (f, phi_i)_T for the interior basis; edge unknowns get 0. The
/// default quadrature degree is 2k + 4.
Eigen::VectorXd assemble_load(const Mesh& mesh, const DofMap& dofs, const ScalarFunction& f,
                              int quad_degree = -1, Execution exec = Execution::parallel);
Eigen::VectorXd assemble_load(const Mesh& mesh, const DofMap& dofs, std::string_view field);

/// dim V_h^0 - sum_T dim [P_j(T)]^2, clamped at 0: a lower bound on the
/// dimension of the kernel of the global weak gradient.
long counting_lower_bound(const Mesh& mesh, int k, int j);

}  // namespace sfwg

#endif
