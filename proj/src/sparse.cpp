#include "sfwg/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sfwg {

SparseSpd SparseSpd::from_triplets(int n, const std::vector<Triplet>& triplets) {
  if (n < 0) throw std::invalid_argument("SparseSpd: negative dimension");
  SparseSpd a;
  a.n_ = n;

  // Stable bucket sort by row.
  std::vector<int> start(n + 1, 0);
  for (const Triplet& t : triplets) {
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n) {
      throw std::out_of_range("SparseSpd: triplet index out of range");
    }
    ++start[t.row + 1];
  }
  std::partial_sum(start.begin(), start.end(), start.begin());
  std::vector<int> order(triplets.size());
  {
    std::vector<int> fill(start.begin(), start.end() - 1);
    for (std::size_t i = 0; i < triplets.size(); ++i) order[fill[triplets[i].row]++] = static_cast<int>(i);
  }

  a.row_ptr_.assign(n + 1, 0);
  a.col_idx_.reserve(triplets.size() / 2);
  a.values_.reserve(triplets.size() / 2);
  for (int r = 0; r < n; ++r) {
    const auto first = order.begin() + start[r];
    const auto last = order.begin() + start[r + 1];
    std::stable_sort(first, last, [&](int x, int y) { return triplets[x].col < triplets[y].col; });
    for (auto it = first; it != last; ++it) {
      const Triplet& t = triplets[*it];
      if (static_cast<int>(a.col_idx_.size()) > a.row_ptr_[r] && a.col_idx_.back() == t.col) {
        a.values_.back() += t.value;
      } else {
        a.col_idx_.push_back(t.col);
        a.values_.push_back(t.value);
      }
    }
    a.row_ptr_[r + 1] = static_cast<int>(a.col_idx_.size());
  }
  return a;
}

SparseSpd SparseSpd::from_dense(const Eigen::MatrixXd& dense, double drop) {
  if (dense.rows() != dense.cols()) throw std::invalid_argument("SparseSpd: matrix must be square");
  std::vector<Triplet> trip;
  for (int i = 0; i < dense.rows(); ++i) {
    for (int j = 0; j < dense.cols(); ++j) {
      if (std::abs(dense(i, j)) > drop || i == j) trip.push_back({i, j, dense(i, j)});
    }
  }
  return from_triplets(static_cast<int>(dense.rows()), trip);
}

double SparseSpd::coeff(int i, int j) const {
  const auto first = col_idx_.begin() + row_ptr_[i];
  const auto last = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(first, last, j);
  return (it != last && *it == j) ? values_[it - col_idx_.begin()] : 0.0;
}

Eigen::VectorXd SparseSpd::diagonal() const {
  Eigen::VectorXd d(n_);
  for (int i = 0; i < n_; ++i) d(i) = coeff(i, i);
  return d;
}

Eigen::MatrixXd SparseSpd::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n_, n_);
  for (int i = 0; i < n_; ++i) {
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) d(i, col_idx_[p]) = values_[p];
  }
  return d;
}

Eigen::VectorXd SparseSpd::multiply(const Eigen::VectorXd& x) const {
  if (x.size() != n_) throw std::invalid_argument("SparseSpd::multiply: size mismatch");
  Eigen::VectorXd y(n_);
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) s += values_[p] * x(col_idx_[p]);
    y(i) = s;
  }
  return y;
}

bool SparseSpd::structurally_symmetric() const {
  for (int i = 0; i < n_; ++i) {
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      const int j = col_idx_[p];
      const auto first = col_idx_.begin() + row_ptr_[j];
      const auto last = col_idx_.begin() + row_ptr_[j + 1];
      if (!std::binary_search(first, last, i)) return false;
    }
  }
  return true;
}

double SparseSpd::relative_asymmetry() const {
  double amax = 0.0;
  double dmax = 0.0;
  for (int i = 0; i < n_; ++i) {
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      amax = std::max(amax, std::abs(values_[p]));
      dmax = std::max(dmax, std::abs(values_[p] - coeff(col_idx_[p], i)));
    }
  }
  return amax > 0.0 ? dmax / amax : 0.0;
}

}  // namespace sfwg
