#include "sfwg/kernels.hpp"

#include <algorithm>

#include "sfwg/weak_gradient.hpp"

namespace sfwg::kernels {

namespace {
constexpr std::size_t kDotBlock = 4096;
}

namespace reference {

std::vector<Eigen::MatrixXd> local_stiffness_matrices(const Mesh& mesh, int k, int j) {
  std::vector<Eigen::MatrixXd> out(mesh.num_elements());
  for (int t = 0; t < mesh.num_elements(); ++t) {
    out[t] = build_local_operator(mesh, t, k, j).stiffness;
  }
  return out;
}

void spmv(const SparseSpd& a, std::span<const double> x, std::span<double> y) {
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto v = a.values();
  for (int i = 0; i < a.size(); ++i) {
    double s = 0.0;
    for (int p = rp[i]; p < rp[i + 1]; ++p) s += v[p] * x[ci[p]];
    y[i] = s;
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace reference

namespace omp {

std::vector<Eigen::MatrixXd> local_stiffness_matrices(const Mesh& mesh, int k, int j) {
  std::vector<Eigen::MatrixXd> out(mesh.num_elements());
  for_each_element(mesh.num_elements(),
                   [&](int t) { out[t] = build_local_operator(mesh, t, k, j).stiffness; });
  return out;
}

void spmv(const SparseSpd& a, std::span<const double> x, std::span<double> y) {
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto v = a.values();
  const int n = a.size();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int p = rp[i]; p < rp[i + 1]; ++p) s += v[p] * x[ci[p]];
    y[i] = s;
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const long nblocks = static_cast<long>((n + kDotBlock - 1) / kDotBlock);
  std::vector<double> partial(nblocks, 0.0);
#pragma omp parallel for schedule(static)
  for (long blk = 0; blk < nblocks; ++blk) {
    const std::size_t lo = blk * kDotBlock;
    const std::size_t hi = std::min(n, lo + kDotBlock);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
    partial[blk] = s;
  }
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

}  // namespace omp

}  // namespace sfwg::kernels
