#include "ddlab/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "eigen_io.hpp"

namespace ddlab {

namespace {

double dot_v(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm_v(std::span<const double> a) { return std::sqrt(dot_v(a, a)); }

}  // namespace

std::pair<std::vector<double>, SolveReport> pcg(const SparseSymMatrix& A, const ApplyFn& precond,
                                                std::span<const double> b, double tol,
                                                int max_iter) {
  const int n = A.n;
  SolveReport rep;
  rep.tolerance = tol;

  std::vector<double> x(n, 0.0);
  const double norm_b = norm_v(b);
  if (norm_b == 0.0) {
    rep.converged = true;
    return {x, rep};
  }

  std::vector<double> r(b.begin(), b.end());
  std::vector<double> z(n), p(n), q(n);
  precond(r, z);
  p = z;
  double rho = dot_v(r, z);

  for (int k = 0; k < max_iter; ++k) {
    A.apply(p, q);
    double pq = dot_v(p, q);
    if (!(std::isfinite(pq)) || pq <= 0.0)
      throw std::runtime_error("pcg: direction curvature not positive (A not SPD?)");
    double alpha = rho / pq;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    rep.alpha.push_back(alpha);
    rep.iterations = k + 1;

    double relres = norm_v(r) / norm_b;
    if (!std::isfinite(relres)) throw std::runtime_error("pcg: non-finite residual");
    rep.relative_residuals.push_back(relres);
    if (relres <= tol) {
      rep.converged = true;
      break;
    }

    precond(r, z);
    double rho_new = dot_v(r, z);
    if (!(std::isfinite(rho_new)) || rho_new <= 0.0)
      throw std::runtime_error("pcg: preconditioned residual norm not positive");
    double beta = rho_new / rho;
    rep.beta.push_back(beta);
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    rho = rho_new;
  }

  A.apply(x, q);
  double true_res = 0.0;
  for (int i = 0; i < n; ++i) {
    double d = b[i] - q[i];
    true_res += d * d;
  }
  rep.final_relres = std::sqrt(true_res) / norm_b;
  if (rep.converged) rep.converged = rep.final_relres <= tol;

  if (rep.iterations >= 1) {
    auto [lo, hi] = lanczos_extremes(rep);
    rep.ritz_min = lo;
    rep.ritz_max = hi;
    rep.kappa = hi / lo;
  }
  return {x, rep};
}

namespace {

// Eigenvalue count below x via the Sturm/LDL^T recurrence. Pivots smaller
// than pivmin are replaced by -pivmin before they are counted.
int count_below(std::span<const double> a, std::span<const double> e, double x, double pivmin) {
  int count = 0;
  double d = a[0] - x;
  if (std::fabs(d) < pivmin) d = -pivmin;
  if (d < 0) ++count;
  for (std::size_t i = 1; i < a.size(); ++i) {
    d = (a[i] - x) - e[i - 1] * e[i - 1] / d;
    if (std::fabs(d) < pivmin) d = -pivmin;
    if (d < 0) ++count;
  }
  return count;
}

double bisect_for(std::span<const double> a, std::span<const double> e, double lo, double hi,
                  int want_below, double pivmin) {
  // Invariant: count(lo) < want_below <= count(hi).
  while (hi - lo > 1e-10) {
    double mid = 0.5 * (lo + hi);
    if (count_below(a, e, mid, pivmin) >= want_below)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::pair<double, double> tridiag_extremes(std::span<const double> diag,
                                           std::span<const double> offdiag) {
  const std::size_t n = diag.size();
  if (n == 0) throw std::invalid_argument("tridiag_extremes: empty matrix");
  if (offdiag.size() + 1 != n)
    throw std::invalid_argument("tridiag_extremes: offdiag size must be n-1");
  if (n == 1) return {diag[0], diag[0]};

  double lo = diag[0], hi = diag[0], scale = std::fabs(diag[0]);
  for (std::size_t i = 0; i < n; ++i) {
    double r = (i > 0 ? std::fabs(offdiag[i - 1]) : 0.0) +
               (i + 1 < n ? std::fabs(offdiag[i]) : 0.0);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
    scale = std::max({scale, std::fabs(diag[i]), i + 1 < n ? std::fabs(offdiag[i]) : 0.0});
  }
  lo -= 1e-10;
  hi += 1e-10;
  double pivmin = std::max(1e-300, 1e-25 * scale * scale);

  double lmin = bisect_for(diag, offdiag, lo, hi, 1, pivmin);
  double lmax = bisect_for(diag, offdiag, lo, hi, static_cast<int>(n), pivmin);
  return {lmin, lmax};
}

std::pair<double, double> lanczos_extremes(const SolveReport& report) {
  const std::size_t k = report.alpha.size();
  if (k < 1) throw std::invalid_argument("lanczos_extremes: no CG iterations recorded");
  std::vector<double> diag(k), off(k > 0 ? k - 1 : 0);
  for (std::size_t j = 0; j < k; ++j) {
    diag[j] = 1.0 / report.alpha[j];
    if (j > 0) diag[j] += report.beta[j - 1] / report.alpha[j - 1];
    if (j + 1 < k) off[j] = std::sqrt(report.beta[j]) / report.alpha[j];
  }
  return tridiag_extremes(diag, off);
}

std::vector<double> dense_spectrum(const SparseSymMatrix& A, const ApplyFn& precond) {
  const int n = A.n;
  if (n > 4000) throw std::invalid_argument("dense_spectrum: dimension exceeds the 4000 guard");

  Eigen::SparseMatrix<double> E = to_eigen(A);
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(E);
  if (llt.info() != Eigen::Success) throw std::runtime_error("dense_spectrum: factorization failure");

  // P A P^T = L L^T, so Ltilde = P^T L gives A = Ltilde Ltilde^T and the
  // preconditioned operator is similar to the symmetric Ltilde^T B^-1 Ltilde.
  Eigen::SparseMatrix<double> Ltilde =
      llt.permutationPinv() * Eigen::SparseMatrix<double>(llt.matrixL());

  Eigen::MatrixXd S(n, n);
  std::vector<double> col(n), pcol(n);
  for (int j = 0; j < n; ++j) {
    std::fill(col.begin(), col.end(), 0.0);
    for (Eigen::SparseMatrix<double>::InnerIterator it(Ltilde, j); it; ++it)
      col[it.row()] = it.value();
    precond(col, pcol);
    Eigen::Map<const Eigen::VectorXd> pv(pcol.data(), n);
    S.col(j) = Ltilde.transpose() * pv;
  }
  Eigen::MatrixXd Sym = 0.5 * (S + S.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("dense_spectrum: eigensolver failure");
  std::vector<double> eig(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::sort(eig.begin(), eig.end());
  return eig;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<double> random_vector(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
  return v;
}

}  // namespace ddlab
