#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ddlab {

enum class FormKind { Curl, Div };
enum class EigMethod { Lanczos, Dense, Auto };

const char* to_string(FormKind f);
const char* to_string(EigMethod m);

/// One (form, n, r, m) measurement run.
struct CaseSpec {
  FormKind form = FormKind::Curl;
  int n = 2;
  int r = 2;
  int m = 1;
  bool use_coarse = true;
  EigMethod eig = EigMethod::Auto;
  double tol = 1e-10;
  std::uint64_t seed = 42;
};

struct SweepRecord {
  std::string form;
  int n_coarse = 0;
  int refine = 0;
  int overlap_layers = 0;
  double H = 0.0;
  double h = 0.0;
  double delta = 0.0;
  double ratio = 0.0;  // H/delta = 2^refine / overlap_layers
  int n_dofs = 0;
  int n_colors = 0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double kappa = 0.0;
  int pcg_iters = 0;
  double final_relres = 0.0;
  std::string eig_method;
  std::uint64_t seed = 0;
  std::string error;  // empty on success
};

struct SweepConfig {
  FormKind form = FormKind::Curl;
  std::vector<int> n_coarse;
  std::vector<int> refine;
  std::vector<int> overlap_layers;
  EigMethod eig_method = EigMethod::Auto;
  double tol = 1e-10;
  std::uint64_t seed = 42;
  std::string output_path;  // CSV written here when non-empty
  bool use_coarse = true;   // internal knob; the CLI always runs two-level
};

/// Assembles, preconditions and measures one case.
SweepRecord solve_case(const CaseSpec& spec);

/// Runs every (n, r, m) tuple; per-tuple failures land in the error column
/// and the sweep continues. Records are sorted by (form, n, r, m).
std::vector<SweepRecord> run_sweep(const SweepConfig& cfg);

// CSV serialization: fixed column order as in SweepRecord plus a trailing
// error column, header row, '.' decimal separator, LF endings, doubles with
// 17 significant digits (bit-exact round trip).
std::string emit_csv(std::span<const SweepRecord> records);
std::vector<SweepRecord> parse_csv(const std::string& text);
void write_csv(const std::string& path, std::span<const SweepRecord> records);

/// Least-squares fits of kappa against 1+rho (linear) and rho^2 (quadratic),
/// rho = H/delta, plus kappa growth ratios across consecutive rho doublings.
struct FitResult {
  std::string form;
  int n_coarse = 0;
  int refine = 0;
  double c0_lin = 0.0, c1_lin = 0.0, r2_lin = 0.0;
  double c0_quad = 0.0, c2_quad = 0.0, r2_quad = 0.0;
  std::vector<double> growth_ratios;
};

/// Groups by (form, n_coarse, refine); records with a nonempty error column
/// are skipped. Throws std::invalid_argument for groups with < 3 distinct rho.
std::vector<FitResult> fit_models(std::span<const SweepRecord> records);

std::string fits_json(std::span<const FitResult> fits);

enum class VerifyLevel { Fast, Full };

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  VerifyLevel level = VerifyLevel::Fast;
  std::vector<CheckResult> checks;
  bool all_passed = true;
  std::string to_json() const;
};

/// Runs the module invariant suites (fast: everything cheap; full: adds the
/// dense-oracle comparisons).
VerifyReport run_verify(VerifyLevel level);

}  // namespace ddlab
