#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ddlab/sparse.hpp"

namespace ddlab {

using ApplyFn = std::function<void(std::span<const double>, std::span<double>)>;

/// Trace of one preconditioned CG run plus the spectral estimates derived
/// from it. ritz_min/ritz_max are the extreme eigenvalues of the Lanczos
/// tridiagonal built from the CG coefficients; kappa = ritz_max/ritz_min.
struct SolveReport {
  int iterations = 0;
  std::vector<double> relative_residuals;  // recurrence residual after each iteration
  std::vector<double> alpha;
  std::vector<double> beta;
  double ritz_min = 0.0;
  double ritz_max = 0.0;
  double kappa = 0.0;
  std::string method = "lanczos";
  bool converged = false;
  double tolerance = 0.0;
  double final_relres = 0.0;  // true residual ||b - Ax|| / ||b|| at exit
};

/// Preconditioned conjugate gradients for SPD A with self-adjoint positive
/// definite preconditioner apply. Aborts with std::runtime_error on
/// non-finite values. max_iter exceeded => converged = false, partial report.
std::pair<std::vector<double>, SolveReport> pcg(const SparseSymMatrix& A, const ApplyFn& precond,
                                                std::span<const double> b, double tol,
                                                int max_iter);

/// Extreme eigenvalues of a symmetric tridiagonal matrix by Sturm-sequence
/// bisection to 1e-10 absolute.
std::pair<double, double> tridiag_extremes(std::span<const double> diag,
                                           std::span<const double> offdiag);

/// Extremes of the CG-Lanczos tridiagonal of a recorded run:
/// diagonal 1/alpha_k + beta_{k-1}/alpha_{k-1}, off-diagonal sqrt(beta_k)/alpha_k.
/// Requires at least one recorded iteration.
std::pair<double, double> lanczos_extremes(const SolveReport& report);

/// All eigenvalues of the preconditioned operator P∘A, sorted ascending.
/// Symmetrized through the energy factorization A = L L^T: returns the
/// spectrum of L^T (P applied to the columns of L). Guarded to dim <= 4000.
std::vector<double> dense_spectrum(const SparseSymMatrix& A, const ApplyFn& precond);

/// Deterministic uniform [-1,1) vector from a 64-bit seed.
std::vector<double> random_vector(int n, std::uint64_t seed);

/// splitmix64 hash step, used to derive per-case seeds from a base seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace ddlab
