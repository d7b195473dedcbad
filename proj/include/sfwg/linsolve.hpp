#ifndef SFWG_LINSOLVE_HPP
#define SFWG_LINSOLVE_HPP

#include <Eigen/Dense>

#include "sfwg/kernels.hpp"
#include "sfwg/sparse.hpp"

namespace sfwg {

enum class SolveStatus { converged, max_iterations, breakdown };

struct SolveStats {
  int iterations = 0;
  double residual = 0.0;  ///< ||b - A x|| / ||b||, recomputed from x
  double seconds = 0.0;
  SolveStatus status = SolveStatus::converged;

  bool converged() const { return status == SolveStatus::converged; }
};

struct SolveResult {
  Eigen::VectorXd x;
  SolveStats stats;
};

/// Jacobi-preconditioned conjugate gradients from a zero initial guess. On
/// max_iterations or breakdown (non-positive curvature or non-finite values,
/// i.e. a singular or indefinite matrix) the last iterate is returned with the
/// status set; callers decide whether that is fatal.
SolveResult cg_solve(const SparseSpd& a, const Eigen::VectorXd& b, double tol = 1e-10,
                     int maxit = 20000, Execution exec = Execution::parallel);

inline constexpr int kProbeLimit = 20000;
inline constexpr int kDenseProbeLimit = 4000;

struct NullityReport {
  int nullity = 0;
  double smallest_pivot = 0.0;  ///< smallest pivot magnitude met by the factorization
  double max_diagonal = 0.0;
  bool dense = true;
  /// Columns spanning the numerical kernel (dense path only).
  Eigen::MatrixXd null_vectors;
};

/// Counts pivots below tau_rel * max|a_ii| in a symmetric LDL^T factorization.
/// Up to `dense_limit` unknowns the factorization is dense with diagonal
/// pivoting and also returns a kernel basis; beyond that a sparse up-looking
/// LDL^T on an AMD ordering is used, skipping tiny pivots (valid for
/// semidefinite matrices). Throws NumericalError above kProbeLimit.
NullityReport nullity_probe(const SparseSpd& a, double tau_rel = 1e-10,
                            int dense_limit = kDenseProbeLimit);

}  // namespace sfwg

#endif
