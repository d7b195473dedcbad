#include "sfwg/linsolve.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "sfwg/error.hpp"

namespace sfwg {

namespace {

std::span<const double> view(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}
std::span<double> view(Eigen::VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

struct Ops {
  Execution exec;
  void spmv(const SparseSpd& a, const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    if (exec == Execution::parallel) {
      kernels::omp::spmv(a, view(x), view(y));
    } else {
      kernels::reference::spmv(a, view(x), view(y));
    }
  }
  double dot(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    return exec == Execution::parallel ? kernels::omp::dot(view(x), view(y))
                                       : kernels::reference::dot(view(x), view(y));
  }
};

}  // namespace

SolveResult cg_solve(const SparseSpd& a, const Eigen::VectorXd& b, double tol, int maxit,
                     Execution exec) {
  if (b.size() != a.size()) throw std::invalid_argument("cg_solve: right-hand side size mismatch");
  if (!b.allFinite()) throw NumericalError("cg_solve: non-finite right-hand side");

  const auto start = std::chrono::steady_clock::now();
  const Ops ops{exec};
  const int n = a.size();

  SolveResult result;
  result.x = Eigen::VectorXd::Zero(n);
  SolveStats& stats = result.stats;

  const double bnorm = std::sqrt(ops.dot(b, b));
  if (bnorm == 0.0) {
    stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  }

  Eigen::VectorXd inv_diag = a.diagonal();
  for (int i = 0; i < n; ++i) inv_diag(i) = inv_diag(i) > 0.0 ? 1.0 / inv_diag(i) : 1.0;

  Eigen::VectorXd& x = result.x;
  Eigen::VectorXd r = b;
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  Eigen::VectorXd ap(n);
  double rz = ops.dot(r, z);

  stats.status = SolveStatus::max_iterations;
  for (int it = 1; it <= maxit; ++it) {
    ops.spmv(a, p, ap);
    const double pap = ops.dot(p, ap);
    if (!(pap > 0.0) || !std::isfinite(pap)) {
      stats.status = SolveStatus::breakdown;
      stats.iterations = it;
      break;
    }
    const double alpha = rz / pap;
    x += alpha * p;
    r -= alpha * ap;
    stats.iterations = it;

    if (std::sqrt(ops.dot(r, r)) <= tol * bnorm) {
      // Confirm on the true residual; on drift, restart from it.
      ops.spmv(a, x, ap);
      r = b - ap;
      if (std::sqrt(ops.dot(r, r)) <= tol * bnorm) {
        stats.status = SolveStatus::converged;
        break;
      }
      z = inv_diag.cwiseProduct(r);
      p = z;
      rz = ops.dot(r, z);
      continue;
    }
    z = inv_diag.cwiseProduct(r);
    const double rz_new = ops.dot(r, z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }

  if (!x.allFinite()) stats.status = SolveStatus::breakdown;
  ops.spmv(a, x, ap);
  stats.residual = (b - ap).norm() / bnorm;
  stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

namespace {

NullityReport dense_probe(const SparseSpd& a, double threshold) {
  const int n = a.size();
  Eigen::MatrixXd s = a.to_dense();
  Eigen::MatrixXd l = Eigen::MatrixXd::Identity(n, n);
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;

  NullityReport rep;
  rep.dense = true;
  double min_pivot = std::numeric_limits<double>::infinity();
  int rank = n;
  for (int i = 0; i < n; ++i) {
    Eigen::Index p;
    const double dmax = s.diagonal().tail(n - i).cwiseAbs().maxCoeff(&p);
    p += i;
    if (dmax < threshold) {
      rank = i;
      break;
    }
    if (p != i) {
      s.row(i).swap(s.row(p));
      s.col(i).swap(s.col(p));
      l.block(i, 0, 1, i).swap(l.block(p, 0, 1, i));
      std::swap(perm[i], perm[p]);
    }
    const double d = s(i, i);
    min_pivot = std::min(min_pivot, std::abs(d));
    const int m = n - i - 1;
    if (m > 0) {
      l.col(i).tail(m) = s.col(i).tail(m) / d;
      s.bottomRightCorner(m, m).noalias() -= d * l.col(i).tail(m) * l.col(i).tail(m).transpose();
    }
  }
  for (int r = rank; r < n; ++r) min_pivot = std::min(min_pivot, std::abs(s(r, r)));
  rep.nullity = n - rank;
  rep.smallest_pivot = n > 0 ? min_pivot : 0.0;

  // Kernel basis: A(perm, perm) = L D L^T with the trailing block of D
  // negligible, so the columns of L^{-T} beyond the rank span the kernel.
  rep.null_vectors.resize(n, rep.nullity);
  if (rep.nullity > 0) {
    const auto l11 = l.topLeftCorner(rank, rank).triangularView<Eigen::UnitLower>();
    for (int c = 0; c < rep.nullity; ++c) {
      Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
      y(rank + c) = 1.0;
      if (rank > 0) {
        Eigen::VectorXd rhs = -l.block(rank + c, 0, 1, rank).transpose();
        y.head(rank) = l11.transpose().solve(rhs);
      }
      Eigen::VectorXd x(n);
      for (int i = 0; i < n; ++i) x(perm[i]) = y(i);
      rep.null_vectors.col(c) = x.normalized();
    }
  }
  return rep;
}

// Up-looking sparse LDL^T (elimination tree + row patterns) on P A P^T.
// A pivot below the threshold is counted as null and its column of L is
// dropped, which is exact for positive semidefinite input.
NullityReport sparse_probe(const SparseSpd& a, double threshold) {
  const int n = a.size();
  Eigen::SparseMatrix<double, Eigen::ColMajor, int> mat(n, n);
  {
    std::vector<Eigen::Triplet<double, int>> trip;
    trip.reserve(a.nonzeros());
    for (int i = 0; i < n; ++i) {
      for (int p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) {
        trip.emplace_back(i, a.col_idx()[p], a.values()[p]);
      }
    }
    mat.setFromTriplets(trip.begin(), trip.end());
  }
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> perm;
  Eigen::AMDOrdering<int> amd;
  amd(mat.selfadjointView<Eigen::Lower>(), perm);
  Eigen::SparseMatrix<double, Eigen::ColMajor, int> c(n, n);
  c = mat.selfadjointView<Eigen::Lower>().twistedBy(perm.inverse());
  c.makeCompressed();

  const int* cp = c.outerIndexPtr();
  const int* ci = c.innerIndexPtr();
  const double* cx = c.valuePtr();

  // Symbolic: elimination tree and column counts from the upper triangle.
  std::vector<int> parent(n, -1), flag(n, -1), lnz(n, 0);
  for (int k = 0; k < n; ++k) {
    flag[k] = k;
    for (int p = cp[k]; p < cp[k + 1]; ++p) {
      int i = ci[p];
      if (i >= k) continue;
      for (; flag[i] != k; i = parent[i]) {
        if (parent[i] == -1) parent[i] = k;
        ++lnz[i];
        flag[i] = k;
      }
    }
  }
  std::vector<long> lp(n + 1, 0);
  for (int k = 0; k < n; ++k) lp[k + 1] = lp[k] + lnz[k];
  std::vector<int> li(lp[n]);
  std::vector<double> lx(lp[n]);

  // Numeric.
  NullityReport rep;
  rep.dense = false;
  std::vector<double> y(n, 0.0), d(n, 0.0);
  std::vector<int> pattern(n);
  std::vector<char> null(n, 0);
  std::fill(lnz.begin(), lnz.end(), 0);
  std::fill(flag.begin(), flag.end(), -1);
  double min_pivot = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    int top = n;
    flag[k] = k;
    for (int p = cp[k]; p < cp[k + 1]; ++p) {
      int i = ci[p];
      if (i > k) continue;
      y[i] += cx[p];
      int len = 0;
      for (; flag[i] != k; i = parent[i]) {
        pattern[len++] = i;
        flag[i] = k;
      }
      while (len > 0) pattern[--top] = pattern[--len];
    }
    d[k] = y[k];
    y[k] = 0.0;
    for (; top < n; ++top) {
      const int i = pattern[top];
      const double yi = y[i];
      y[i] = 0.0;
      if (null[i]) continue;
      for (long p = lp[i]; p < lp[i] + lnz[i]; ++p) y[li[p]] -= lx[p] * yi;
      const double lki = yi / d[i];
      d[k] -= lki * yi;
      li[lp[i] + lnz[i]] = k;
      lx[lp[i] + lnz[i]] = lki;
      ++lnz[i];
    }
    min_pivot = std::min(min_pivot, std::abs(d[k]));
    if (std::abs(d[k]) < threshold) {
      null[k] = 1;
      ++rep.nullity;
    }
  }
  rep.smallest_pivot = n > 0 ? min_pivot : 0.0;
  return rep;
}

}  // namespace

NullityReport nullity_probe(const SparseSpd& a, double tau_rel, int dense_limit) {
  if (a.size() > kProbeLimit) {
    throw NumericalError("nullity_probe: dimension " + std::to_string(a.size()) +
                         " exceeds the probe limit " + std::to_string(kProbeLimit));
  }
  const double max_diag = a.size() > 0 ? a.diagonal().cwiseAbs().maxCoeff() : 0.0;
  const double threshold = tau_rel * max_diag;
  NullityReport rep;
  if (max_diag == 0.0) {
    rep.nullity = a.size();
    rep.null_vectors = Eigen::MatrixXd::Identity(a.size(), a.size());
  } else if (a.size() <= dense_limit) {
    rep = dense_probe(a, threshold);
  } else {
    rep = sparse_probe(a, threshold);
  }
  rep.max_diagonal = max_diag;
  return rep;
}

}  // namespace sfwg
