#ifndef SFWG_SPARSE_HPP
#define SFWG_SPARSE_HPP

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace sfwg {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Square CSR matrix storing the full (not triangular) pattern of a symmetric
/// matrix. Column indices are sorted within each row.
class SparseSpd {
public:
  SparseSpd() = default;

  /// Duplicates are summed in input order, so a fixed triplet order gives
  /// bitwise reproducible values.
  static SparseSpd from_triplets(int n, const std::vector<Triplet>& triplets);
  static SparseSpd from_dense(const Eigen::MatrixXd& dense, double drop = 0.0);

  int size() const { return n_; }
  std::size_t nonzeros() const { return values_.size(); }

  std::span<const int> row_ptr() const { return row_ptr_; }
  std::span<const int> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }

  double coeff(int i, int j) const;
  Eigen::VectorXd diagonal() const;
  Eigen::MatrixXd to_dense() const;
  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;

  bool structurally_symmetric() const;
  /// max |a_ij - a_ji| / max |a_ij|
  double relative_asymmetry() const;

private:
  int n_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

}  // namespace sfwg

#endif
