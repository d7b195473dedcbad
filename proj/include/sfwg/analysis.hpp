#ifndef SFWG_ANALYSIS_HPP
#define SFWG_ANALYSIS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sfwg/assembly.hpp"
#include "sfwg/fields.hpp"
#include "sfwg/linsolve.hpp"
#include "sfwg/mesh.hpp"

namespace sfwg {

/// A function of the full space V_h: interior P_k coefficients per element and
/// P_k(e) coefficients per global edge, boundary edges included.
struct WgFunction {
  int k = 1;
  Eigen::VectorXd interior;  ///< num_elements * dim_pk(k)
  Eigen::VectorXd edges;     ///< num_edges * (k + 1)

  static WgFunction zero(const Mesh& mesh, int k);
  /// Local DOF vector of one element in LocalDofLayout order.
  Eigen::VectorXd local(const Mesh& mesh, int element) const;
};

/// Lifts an unknown vector of V_h^0 to V_h with v_b = 0 on boundary edges.
WgFunction expand(const Mesh& mesh, const DofMap& dofs, const Eigen::VectorXd& unknowns);

/// Elementwise L2 projection onto P_k(T), quadrature degree 2k + 4.
Eigen::VectorXd project_q0(const Mesh& mesh, int k, const ScalarFunction& u);
/// Edgewise L2 projection onto P_k(e) for every edge, quadrature degree 2k + 4.
Eigen::VectorXd project_qb(const Mesh& mesh, int k, const ScalarFunction& u);
WgFunction project_qh(const Mesh& mesh, int k, const ScalarFunction& u);

/// Local Gram matrix of ||grad v0||_T^2 + h_T^{-1} ||v0 - vb||_{dT}^2.
Eigen::MatrixXd local_h1_matrix(const Mesh& mesh, int element, int k);

double energy_norm(const Mesh& mesh, int k, int j, const Eigen::VectorXd& unknowns);
double energy_norm(const Mesh& mesh, int j, const WgFunction& v, Execution exec = Execution::parallel);
/// Same norm with precomputed local stiffness matrices.
double energy_norm(const Mesh& mesh, std::span<const Eigen::MatrixXd> local_stiffness,
                   const WgFunction& v, Execution exec = Execution::parallel);
double h1_norm(const Mesh& mesh, int k, const Eigen::VectorXd& unknowns);
double h1_norm(const Mesh& mesh, const WgFunction& v);

/// ||v0 - c0|| where c0 are interior coefficients in the same layout.
double interior_l2_distance(const Mesh& mesh, int k, const Eigen::VectorXd& v0,
                            const Eigen::VectorXd& c0);
/// ||u - sum_i c_i phi_i|| elementwise, quadrature degree 2k + 4.
double l2_error(const Mesh& mesh, int k, const Eigen::VectorXd& c0, const ScalarFunction& u);

enum class MeshKind { triangles, quads, hexagons };
Mesh build_mesh(MeshKind kind, int n);

struct ConvergenceConfig {
  std::string field = "sinsin";
  int k = 1;
  std::optional<int> j;  ///< empty: auto
  std::vector<int> levels{2, 4, 8};
  MeshKind mesh = MeshKind::triangles;
  double tol = 1e-10;
  int maxit = 20000;
};

struct ConvergenceRow {
  int n = 0;
  double h = 0.0;
  int dofs = 0;
  double energy_error = 0.0;
  std::optional<double> energy_rate;
  double l2_error = 0.0;
  std::optional<double> l2_rate;
  SolveStats solve;
};

struct ConvergenceReport {
  std::string field;
  int k = 1;
  int j = 2;
  bool j_auto = false;
  std::vector<ConvergenceRow> rows;
};

/// Solves on each level of the ladder and tabulates |||u_h - Q_h u||| and
/// ||u_0 - Q_0 u|| with their observed rates. Throws ConfigError on an
/// invalid configuration and NumericalError if a solve fails to converge.
ConvergenceReport convergence_study(const ConvergenceConfig& config);

std::string to_csv(const ConvergenceReport& report);
std::string to_markdown(const ConvergenceReport& report);

/// Global Gram matrix of ||.||_{1,h}^2 on V_h^0.
SparseSpd assemble_h1_gram(const Mesh& mesh, const DofMap& dofs);

struct NormEquivalence {
  int samples = 0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  std::optional<double> exact_min;
  std::optional<double> exact_max;
};

inline constexpr int kExactNormStudyLimit = 2000;

/// |||v||| / ||v||_{1,h} over seeded random unknown vectors, plus the exact
/// extremes from the generalized eigenproblem (A, B) when the space has at
/// most kExactNormStudyLimit unknowns and `exact` is set.
NormEquivalence norm_equivalence_study(const Mesh& mesh, int k, int j, int samples,
                                       std::uint64_t seed, bool exact = true);

double norm_ratio(const Mesh& mesh, int k, int j, const Eigen::VectorXd& unknowns);

struct SingularityReport {
  int unknowns = 0;
  long counting_bound = 0;
  NullityReport probe;
  bool singular() const { return probe.nullity > 0; }
};

SingularityReport singularity_study(const Mesh& mesh, int k, int j, double tau_rel = 1e-10);

}  // namespace sfwg

#endif
