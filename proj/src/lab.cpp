#include "ddlab/lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "ddlab/assembly.hpp"
#include "ddlab/krylov.hpp"
#include "ddlab/schwarz.hpp"

namespace ddlab {

const char* to_string(FormKind f) { return f == FormKind::Curl ? "curl" : "div"; }

const char* to_string(EigMethod m) {
  switch (m) {
    case EigMethod::Lanczos: return "lanczos";
    case EigMethod::Dense: return "dense";
    case EigMethod::Auto: return "auto";
  }
  return "?";
}

namespace {

constexpr int kDenseGuard = 4000;
constexpr int kMaxPcgIters = 10000;

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

}  // namespace

SweepRecord solve_case(const CaseSpec& spec) {
  SweepRecord rec;
  rec.form = to_string(spec.form);
  rec.n_coarse = spec.n;
  rec.refine = spec.r;
  rec.overlap_layers = spec.m;
  rec.seed = spec.seed;
  rec.H = 1.0 / spec.n;
  rec.h = 1.0 / (spec.n * (1 << spec.r));
  rec.delta = spec.m * rec.h;
  rec.ratio = static_cast<double>(1 << spec.r) / spec.m;

  Mesh coarse = build_coarse(spec.n);
  Mesh fine = coarse;
  for (int i = 0; i < spec.r; ++i) fine = refine(fine);

  const SpaceKind kind = spec.form == FormKind::Curl ? SpaceKind::ND0 : SpaceKind::RT0;
  DofSpace fine_space = build_space(fine, kind);
  rec.n_dofs = fine_space.n_free;

  SparseSymMatrix A_h =
      spec.form == FormKind::Curl ? assemble_curl(fine_space) : assemble_div(fine_space);

  Decomposition dec = build_decomposition(fine, spec.m);
  rec.n_colors = dec.n_colors;

  SchwarzPreconditioner P = [&] {
    if (!spec.use_coarse) return build_preconditioner(A_h, dec);
    DofSpace coarse_space = build_space(coarse, kind);
    SparseSymMatrix A_H =
        spec.form == FormKind::Curl ? assemble_curl(coarse_space) : assemble_div(coarse_space);
    EmbeddingMatrix I_H = build_embedding(coarse_space, fine_space);
    return build_preconditioner(A_h, A_H, I_H, dec, true);
  }();

  ApplyFn apply = [&P](std::span<const double> r, std::span<double> z) { P.apply(r, z); };

  std::uint64_t salt = (static_cast<std::uint64_t>(spec.form == FormKind::Div) << 48) ^
                       (static_cast<std::uint64_t>(spec.n) << 32) ^
                       (static_cast<std::uint64_t>(spec.r) << 16) ^
                       static_cast<std::uint64_t>(spec.m);
  std::vector<double> b = random_vector(fine_space.n_free, mix_seed(spec.seed, salt));

  auto [x, report] = pcg(A_h, apply, b, spec.tol, kMaxPcgIters);
  rec.pcg_iters = report.iterations;
  rec.final_relres = report.final_relres;

  bool dense = spec.eig == EigMethod::Dense ||
               (spec.eig == EigMethod::Auto && fine_space.n_free <= kDenseGuard);
  if (dense) {
    std::vector<double> eig = dense_spectrum(A_h, apply);
    rec.lambda_min = eig.front();
    rec.lambda_max = eig.back();
    rec.eig_method = "dense";
  } else {
    rec.lambda_min = report.ritz_min;
    rec.lambda_max = report.ritz_max;
    rec.eig_method = "lanczos";
  }
  rec.kappa = rec.lambda_max / rec.lambda_min;
  return rec;
}

std::vector<SweepRecord> run_sweep(const SweepConfig& cfg) {
  if (cfg.n_coarse.empty() || cfg.refine.empty() || cfg.overlap_layers.empty())
    throw std::invalid_argument("run_sweep: empty parameter list");
  for (int m : cfg.overlap_layers)
    if (m < 1) throw std::invalid_argument("run_sweep: overlap_layers must be >= 1");

  std::vector<SweepRecord> records;
  for (int n : cfg.n_coarse)
    for (int r : cfg.refine)
      for (int m : cfg.overlap_layers) {
        CaseSpec spec{cfg.form, n, r, m, cfg.use_coarse, cfg.eig_method, cfg.tol, cfg.seed};
        try {
          records.push_back(solve_case(spec));
        } catch (const std::exception& e) {
          SweepRecord rec;
          rec.form = to_string(cfg.form);
          rec.n_coarse = n;
          rec.refine = r;
          rec.overlap_layers = m;
          rec.seed = cfg.seed;
          rec.H = 1.0 / n;
          rec.h = 1.0 / (n * (1 << r));
          rec.delta = m * rec.h;
          rec.ratio = static_cast<double>(1 << r) / m;
          double nan = std::numeric_limits<double>::quiet_NaN();
          rec.lambda_min = rec.lambda_max = rec.kappa = rec.final_relres = nan;
          rec.eig_method = to_string(cfg.eig_method);
          rec.error = sanitize(e.what());
          records.push_back(std::move(rec));
        }
      }

  std::sort(records.begin(), records.end(), [](const SweepRecord& a, const SweepRecord& b) {
    return std::tie(a.form, a.n_coarse, a.refine, a.overlap_layers) <
           std::tie(b.form, b.n_coarse, b.refine, b.overlap_layers);
  });
  if (!cfg.output_path.empty()) write_csv(cfg.output_path, records);
  return records;
}

namespace {

const char* kCsvHeader =
    "form,n_coarse,refine,overlap_layers,H,h,delta,ratio,n_dofs,n_colors,"
    "lambda_min,lambda_max,kappa,pcg_iters,final_relres,eig_method,seed,error";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string emit_csv(std::span<const SweepRecord> records) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : records) {
    out += r.form + ',' + std::to_string(r.n_coarse) + ',' + std::to_string(r.refine) + ',' +
           std::to_string(r.overlap_layers) + ',' + fmt(r.H) + ',' + fmt(r.h) + ',' +
           fmt(r.delta) + ',' + fmt(r.ratio) + ',' + std::to_string(r.n_dofs) + ',' +
           std::to_string(r.n_colors) + ',' + fmt(r.lambda_min) + ',' + fmt(r.lambda_max) + ',' +
           fmt(r.kappa) + ',' + std::to_string(r.pcg_iters) + ',' + fmt(r.final_relres) + ',' +
           r.eig_method + ',' + std::to_string(r.seed) + ',' + r.error + '\n';
  }
  return out;
}

std::vector<SweepRecord> parse_csv(const std::string& text) {
  std::vector<SweepRecord> records;
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    if (header) {
      if (line != kCsvHeader) throw std::invalid_argument("parse_csv: unexpected header");
      header = false;
      continue;
    }
    std::vector<std::string> f;
    std::size_t p = 0;
    while (true) {
      std::size_t c = line.find(',', p);
      if (c == std::string::npos) {
        f.push_back(line.substr(p));
        break;
      }
      f.push_back(line.substr(p, c - p));
      p = c + 1;
    }
    if (f.size() != 18) throw std::invalid_argument("parse_csv: wrong field count");
    SweepRecord r;
    r.form = f[0];
    r.n_coarse = std::stoi(f[1]);
    r.refine = std::stoi(f[2]);
    r.overlap_layers = std::stoi(f[3]);
    r.H = std::strtod(f[4].c_str(), nullptr);
    r.h = std::strtod(f[5].c_str(), nullptr);
    r.delta = std::strtod(f[6].c_str(), nullptr);
    r.ratio = std::strtod(f[7].c_str(), nullptr);
    r.n_dofs = std::stoi(f[8]);
    r.n_colors = std::stoi(f[9]);
    r.lambda_min = std::strtod(f[10].c_str(), nullptr);
    r.lambda_max = std::strtod(f[11].c_str(), nullptr);
    r.kappa = std::strtod(f[12].c_str(), nullptr);
    r.pcg_iters = std::stoi(f[13]);
    r.final_relres = std::strtod(f[14].c_str(), nullptr);
    r.eig_method = f[15];
    r.seed = std::stoull(f[16]);
    r.error = f[17];
    records.push_back(std::move(r));
  }
  return records;
}

void write_csv(const std::string& path, std::span<const SweepRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  out << emit_csv(records);
}

namespace {

struct Fit2 {
  double c0 = 0.0, c1 = 0.0, r2 = 0.0;
};

// Least squares y ~ c0 + c1*x by normal equations.
Fit2 fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  Fit2 f;
  double denom = n * sxx - sx * sx;
  f.c1 = (n * sxy - sx * sy) / denom;
  f.c0 = (sy - f.c1 * sx) / n;
  double ss_res = 0, ss_tot = 0, mean = sy / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double e = y[i] - (f.c0 + f.c1 * x[i]);
    ss_res += e * e;
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

}  // namespace

std::vector<FitResult> fit_models(std::span<const SweepRecord> records) {
  std::vector<FitResult> fits;
  std::vector<std::tuple<std::string, int, int>> keys;
  for (const auto& r : records) {
    if (!r.error.empty()) continue;
    auto key = std::make_tuple(r.form, r.n_coarse, r.refine);
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
  }
  for (const auto& [form, n, r] : keys) {
    std::vector<double> rho, kappa;
    for (const auto& rec : records)
      if (rec.error.empty() && rec.form == form && rec.n_coarse == n && rec.refine == r) {
        rho.push_back(rec.ratio);
        kappa.push_back(rec.kappa);
      }
    std::vector<double> distinct = rho;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 3)
      throw std::invalid_argument("fit_models: group needs >= 3 distinct rho values");

    FitResult fit;
    fit.form = form;
    fit.n_coarse = n;
    fit.refine = r;
    Fit2 lin = fit_line(rho, kappa);
    fit.c0_lin = lin.c0;
    fit.c1_lin = lin.c1;
    fit.r2_lin = lin.r2;
    std::vector<double> rho2(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) rho2[i] = rho[i] * rho[i];
    Fit2 quad = fit_line(rho2, kappa);
    fit.c0_quad = quad.c0;
    fit.c2_quad = quad.c1;
    fit.r2_quad = quad.r2;

    // kappa(2 rho) / kappa(rho) over consecutive exact doublings.
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < rho.size(); ++i) pts.emplace_back(rho[i], kappa[i]);
    std::sort(pts.begin(), pts.end());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
      if (std::fabs(pts[i + 1].first - 2.0 * pts[i].first) <= 1e-9 * pts[i].first)
        fit.growth_ratios.push_back(pts[i + 1].second / pts[i].second);

    fits.push_back(std::move(fit));
  }
  return fits;
}

std::string fits_json(std::span<const FitResult> fits) {
  std::string out = "{\"groups\":[";
  for (std::size_t i = 0; i < fits.size(); ++i) {
    const auto& f = fits[i];
    if (i) out += ',';
    out += "{\"form\":\"" + f.form + "\",\"n_coarse\":" + std::to_string(f.n_coarse) +
           ",\"refine\":" + std::to_string(f.refine) + ",\"c0_lin\":" + fmt(f.c0_lin) +
           ",\"c1_lin\":" + fmt(f.c1_lin) + ",\"r2_lin\":" + fmt(f.r2_lin) +
           ",\"c0_quad\":" + fmt(f.c0_quad) + ",\"c2_quad\":" + fmt(f.c2_quad) +
           ",\"r2_quad\":" + fmt(f.r2_quad) + ",\"growth_ratios\":[";
    for (std::size_t g = 0; g < f.growth_ratios.size(); ++g)
      out += (g ? "," : "") + fmt(f.growth_ratios[g]);
    out += "]}";
  }
  out += "]}";
  return out;
}

std::string VerifyReport::to_json() const {
  std::string out = "{\"level\":\"";
  out += level == VerifyLevel::Fast ? "fast" : "full";
  out += "\",\"passed\":";
  out += all_passed ? "true" : "false";
  out += ",\"checks\":[";
  for (std::size_t i = 0; i < checks.size(); ++i) {
    if (i) out += ',';
    out += "{\"name\":\"" + checks[i].name + "\",\"passed\":";
    out += checks[i].passed ? "true" : "false";
    out += ",\"detail\":\"" + checks[i].detail + "\"}";
  }
  out += "]}";
  return out;
}

}  // namespace ddlab
