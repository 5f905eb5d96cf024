#include "ddlab/sparse.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "eigen_io.hpp"

namespace ddlab {

void SparseSymMatrix::apply(std::span<const double> x, std::span<double> y) const {
  assert(static_cast<int>(x.size()) == n && static_cast<int>(y.size()) == n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += vals[k] * x[cols[k]];
    y[i] = s;
  }
}

std::vector<double> SparseSymMatrix::apply(std::span<const double> x) const {
  std::vector<double> y(n);
  apply(x, y);
  return y;
}

double SparseSymMatrix::coeff(int i, int j) const {
  auto first = cols.begin() + row_ptr[i];
  auto last = cols.begin() + row_ptr[i + 1];
  auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return vals[it - cols.begin()];
}

double SparseSymMatrix::max_abs() const {
  double m = 0.0;
  for (double v : vals) m = std::max(m, std::fabs(v));
  return m;
}

double SparseSymMatrix::symmetry_defect() const {
  double d = 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
      d = std::max(d, std::fabs(vals[k] - coeff(cols[k], i)));
  return d;
}

SparseSymMatrix SparseSymMatrix::principal_submatrix(std::span<const int> indices) const {
  std::vector<int> local(n, -1);
  for (std::size_t p = 0; p < indices.size(); ++p) local[indices[p]] = static_cast<int>(p);

  SparseSymMatrix S;
  S.n = static_cast<int>(indices.size());
  S.symmetric = symmetric;
  S.row_ptr.assign(S.n + 1, 0);
  for (int p = 0; p < S.n; ++p) {
    int i = indices[p];
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
      if (local[cols[k]] >= 0) {
        S.cols.push_back(local[cols[k]]);
        S.vals.push_back(vals[k]);
      }
    S.row_ptr[p + 1] = static_cast<int>(S.cols.size());
  }
  return S;
}

std::string SparseSymMatrix::coordinate_text() const {
  std::string out;
  char buf[96];
  for (int i = 0; i < n; ++i)
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
      if (cols[k] <= i) {
        std::snprintf(buf, sizeof buf, "%d %d %.17g\n", i, cols[k], vals[k]);
        out += buf;
      }
  return out;
}

void SparseMatrix::apply(std::span<const double> x, std::span<double> y) const {
  assert(static_cast<int>(x.size()) == cols && static_cast<int>(y.size()) == rows);
  for (int i = 0; i < rows; ++i) {
    double s = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += vals[k] * x[col_idx[k]];
    y[i] = s;
  }
}

std::vector<double> SparseMatrix::apply(std::span<const double> x) const {
  std::vector<double> y(rows);
  apply(x, y);
  return y;
}

void SparseMatrix::apply_transpose(std::span<const double> x, std::span<double> y) const {
  assert(static_cast<int>(x.size()) == rows && static_cast<int>(y.size()) == cols);
  std::fill(y.begin(), y.end(), 0.0);
  for (int i = 0; i < rows; ++i)
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) y[col_idx[k]] += vals[k] * x[i];
}

std::vector<double> SparseMatrix::apply_transpose(std::span<const double> x) const {
  std::vector<double> y(cols);
  apply_transpose(x, y);
  return y;
}

SparseMatrix SparseBuilder::compress() {
  // stable_sort keeps insertion order among duplicates, so the summation
  // order (and thus the result bit pattern) is deterministic.
  std::stable_sort(trips_.begin(), trips_.end(),
                   [](const Triplet& a, const Triplet& b) {
                     return a.i != b.i ? a.i < b.i : a.j < b.j;
                   });
  SparseMatrix A;
  A.rows = rows_;
  A.cols = cols_;
  A.row_ptr.assign(rows_ + 1, 0);
  for (std::size_t k = 0; k < trips_.size();) {
    int i = trips_[k].i, j = trips_[k].j;
    double v = 0.0;
    while (k < trips_.size() && trips_[k].i == i && trips_[k].j == j) v += trips_[k++].v;
    A.col_idx.push_back(j);
    A.vals.push_back(v);
    A.row_ptr[i + 1]++;
  }
  for (int i = 0; i < rows_; ++i) A.row_ptr[i + 1] += A.row_ptr[i];
  return A;
}

SparseSymMatrix SparseBuilder::compress_symmetric() {
  if (rows_ != cols_) throw std::logic_error("compress_symmetric: matrix not square");
  SparseMatrix A = compress();
  SparseSymMatrix S;
  S.n = rows_;
  S.row_ptr = std::move(A.row_ptr);
  S.cols = std::move(A.col_idx);
  S.vals = std::move(A.vals);
  S.symmetric = true;
  return S;
}

struct CholeskySolver::Impl {
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
  int n = 0;
};

CholeskySolver::CholeskySolver(const SparseSymMatrix& A) : impl_(std::make_unique<Impl>()) {
  impl_->n = A.n;
  Eigen::SparseMatrix<double> E = to_eigen(A);
  impl_->llt.compute(E);
  if (impl_->llt.info() != Eigen::Success)
    throw std::runtime_error("CholeskySolver: factorization failed (matrix not SPD?)");
}

CholeskySolver::CholeskySolver(CholeskySolver&&) noexcept = default;
CholeskySolver& CholeskySolver::operator=(CholeskySolver&&) noexcept = default;
CholeskySolver::~CholeskySolver() = default;

int CholeskySolver::dim() const { return impl_->n; }

void CholeskySolver::solve(std::span<const double> b, std::span<double> x) const {
  assert(static_cast<int>(b.size()) == impl_->n && static_cast<int>(x.size()) == impl_->n);
  Eigen::Map<const Eigen::VectorXd> bv(b.data(), impl_->n);
  Eigen::Map<Eigen::VectorXd> xv(x.data(), impl_->n);
  xv = impl_->llt.solve(bv);
}

std::vector<double> CholeskySolver::solve(std::span<const double> b) const {
  std::vector<double> x(impl_->n);
  solve(b, x);
  return x;
}

}  // namespace ddlab
