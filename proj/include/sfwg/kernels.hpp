#ifndef SFWG_KERNELS_HPP
#define SFWG_KERNELS_HPP

// Data-parallel inner loops. Each kernel has a serial reference version that
// the tests compare against and an OpenMP version used by the solver paths.
// The OpenMP versions write per-index results and reduce in a fixed order, so
// their output does not depend on the thread count.

#include <Eigen/Dense>
#include <exception>
#include <span>
#include <vector>

#include "sfwg/mesh.hpp"
#include "sfwg/sparse.hpp"

namespace sfwg {

enum class Execution { serial, parallel };

namespace kernels {

namespace reference {

std::vector<Eigen::MatrixXd> local_stiffness_matrices(const Mesh& mesh, int k, int j);
void spmv(const SparseSpd& a, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> a, std::span<const double> b);

template <typename F>
void for_each_element(int count, F&& body) {
  for (int t = 0; t < count; ++t) body(t);
}

}  // namespace reference

namespace omp {

std::vector<Eigen::MatrixXd> local_stiffness_matrices(const Mesh& mesh, int k, int j);
void spmv(const SparseSpd& a, std::span<const double> x, std::span<double> y);
/// Block-wise partial sums combined serially; independent of the thread count.
double dot(std::span<const double> a, std::span<const double> b);

template <typename F>
void for_each_element(int count, F&& body) {
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 64)
  for (int t = 0; t < count; ++t) {
    try {
      body(t);
    } catch (...) {
#pragma omp critical(sfwg_for_each_element)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace omp

inline std::vector<Eigen::MatrixXd> local_stiffness_matrices(const Mesh& mesh, int k, int j,
                                                             Execution exec) {
  return exec == Execution::parallel ? omp::local_stiffness_matrices(mesh, k, j)
                                     : reference::local_stiffness_matrices(mesh, k, j);
}

template <typename F>
void for_each_element(int count, Execution exec, F&& body) {
  if (exec == Execution::parallel) {
    omp::for_each_element(count, std::forward<F>(body));
  } else {
    reference::for_each_element(count, std::forward<F>(body));
  }
}

}  // namespace kernels
}  // namespace sfwg

#endif
