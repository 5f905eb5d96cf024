#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace ddlab {

/// Compressed sparse row storage for a symmetric matrix (full pattern kept,
/// logical symmetry flagged and checkable).
struct SparseSymMatrix {
  int n = 0;
  std::vector<int> row_ptr;   // size n+1
  std::vector<int> cols;      // sorted within each row
  std::vector<double> vals;
  bool symmetric = true;

  int nnz() const { return static_cast<int>(cols.size()); }

  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> apply(std::span<const double> x) const;

  double coeff(int i, int j) const;
  double max_abs() const;
  double symmetry_defect() const;  // max |a_ij - a_ji|

  /// Principal submatrix on a strictly increasing index set.
  SparseSymMatrix principal_submatrix(std::span<const int> indices) const;

  /// Debug export, lower triangle, one "i j value" line per entry (0-based).
  std::string coordinate_text() const;
};

/// General rectangular CSR matrix.
struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_ptr;
  std::vector<int> col_idx;
  std::vector<double> vals;

  int nnz() const { return static_cast<int>(col_idx.size()); }

  void apply(std::span<const double> x, std::span<double> y) const;            // y = A x
  std::vector<double> apply(std::span<const double> x) const;
  void apply_transpose(std::span<const double> x, std::span<double> y) const;  // y = A^T x
  std::vector<double> apply_transpose(std::span<const double> x) const;
};

/// Triplet accumulator; duplicate entries are summed in insertion order.
class SparseBuilder {
 public:
  SparseBuilder(int rows, int cols) : rows_(rows), cols_(cols) {}
  void add(int i, int j, double v) { trips_.push_back({i, j, v}); }
  void reserve(std::size_t n) { trips_.reserve(n); }

  SparseMatrix compress();
  SparseSymMatrix compress_symmetric();  // requires rows == cols

 private:
  struct Triplet {
    int i, j;
    double v;
  };
  int rows_, cols_;
  std::vector<Triplet> trips_;
};

/// Sparse SPD factorization (LL^T). Throws std::runtime_error if the matrix
/// is not positive definite.
class CholeskySolver {
 public:
  explicit CholeskySolver(const SparseSymMatrix& A);
  CholeskySolver(CholeskySolver&&) noexcept;
  CholeskySolver& operator=(CholeskySolver&&) noexcept;
  ~CholeskySolver();

  int dim() const;
  void solve(std::span<const double> b, std::span<double> x) const;
  std::vector<double> solve(std::span<const double> b) const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

}  // namespace ddlab
