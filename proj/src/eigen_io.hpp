#pragma once

// Internal Eigen interop; kept out of the public headers.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "ddlab/sparse.hpp"

namespace ddlab {

inline Eigen::SparseMatrix<double> to_eigen(const SparseSymMatrix& A) {
  Eigen::SparseMatrix<double> E(A.n, A.n);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(A.cols.size());
  for (int i = 0; i < A.n; ++i)
    for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
      trips.emplace_back(i, A.cols[k], A.vals[k]);
  E.setFromTriplets(trips.begin(), trips.end());
  return E;
}

}  // namespace ddlab
