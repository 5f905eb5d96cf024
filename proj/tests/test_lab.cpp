#include <doctest.h>

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "ddlab/lab.hpp"

using namespace ddlab;

namespace {

bool same_bits(double a, double b) {
  std::uint64_t ua, ub;
  std::memcpy(&ua, &a, 8);
  std::memcpy(&ub, &b, 8);
  return ua == ub;
}

bool records_equal(const SweepRecord& a, const SweepRecord& b) {
  return a.form == b.form && a.n_coarse == b.n_coarse && a.refine == b.refine &&
         a.overlap_layers == b.overlap_layers && same_bits(a.H, b.H) && same_bits(a.h, b.h) &&
         same_bits(a.delta, b.delta) && same_bits(a.ratio, b.ratio) && a.n_dofs == b.n_dofs &&
         a.n_colors == b.n_colors && same_bits(a.lambda_min, b.lambda_min) &&
         same_bits(a.lambda_max, b.lambda_max) && same_bits(a.kappa, b.kappa) &&
         a.pcg_iters == b.pcg_iters && same_bits(a.final_relres, b.final_relres) &&
         a.eig_method == b.eig_method && a.seed == b.seed && a.error == b.error;
}

}  // namespace

TEST_CASE("solve_case populates a consistent record") {
  CaseSpec spec;
  spec.form = FormKind::Curl;
  spec.n = 2;
  spec.r = 2;
  spec.m = 2;
  SweepRecord rec = solve_case(spec);
  CHECK(rec.form == "curl");
  CHECK(rec.ratio == 2.0);
  CHECK(rec.H == doctest::Approx(0.5));
  CHECK(rec.h == doctest::Approx(0.125));
  CHECK(rec.delta == doctest::Approx(0.25));
  CHECK(rec.kappa == doctest::Approx(rec.lambda_max / rec.lambda_min));
  CHECK(rec.kappa >= 1.0);
  CHECK(rec.n_dofs > 0);
  CHECK(rec.eig_method == "dense");  // auto picks dense at this size
  CHECK(rec.final_relres <= spec.tol);
  CHECK(rec.error.empty());
}

TEST_CASE("degenerate single-subdomain case has kappa 1") {
  CaseSpec spec;
  spec.form = FormKind::Curl;
  spec.n = 1;
  spec.r = 1;
  spec.m = 2;  // both subdomains grow to the whole domain
  spec.use_coarse = false;
  SweepRecord rec = solve_case(spec);
  CHECK(std::fabs(rec.kappa - 1.0) <= 1e-8);
}

TEST_CASE("run_sweep: determinism, sorting, error rows") {
  SweepConfig cfg;
  cfg.form = FormKind::Curl;
  cfg.n_coarse = {2};
  cfg.refine = {2};
  cfg.overlap_layers = {2, 1};
  cfg.seed = 42;
  auto recs = run_sweep(cfg);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].overlap_layers == 1);  // sorted by (form, n, r, m)
  CHECK(recs[1].overlap_layers == 2);

  auto again = run_sweep(cfg);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(same_bits(recs[i].lambda_min, again[i].lambda_min));
    CHECK(same_bits(recs[i].lambda_max, again[i].lambda_max));
    CHECK(same_bits(recs[i].kappa, again[i].kappa));
  }

  // r=0 with m>=1 cannot build a decomposition: failure lands in the error
  // column and the sweep continues.
  SweepConfig bad = cfg;
  bad.refine = {0, 2};
  auto mixed = run_sweep(bad);
  REQUIRE(mixed.size() == 4);
  CHECK_FALSE(mixed[0].error.empty());
  CHECK_FALSE(mixed[1].error.empty());
  CHECK(mixed[2].error.empty());
  CHECK(std::isnan(mixed[0].kappa));

  SweepConfig empty = cfg;
  empty.n_coarse = {};
  CHECK_THROWS_AS(run_sweep(empty), std::invalid_argument);
  SweepConfig zero = cfg;
  zero.overlap_layers = {0};
  CHECK_THROWS_AS(run_sweep(zero), std::invalid_argument);
}

TEST_CASE("matched curl and div sweeps agree") {
  SweepConfig cfg;
  cfg.n_coarse = {2};
  cfg.refine = {2};
  cfg.overlap_layers = {1, 2};
  cfg.form = FormKind::Curl;
  auto curl_recs = run_sweep(cfg);
  cfg.form = FormKind::Div;
  auto div_recs = run_sweep(cfg);
  REQUIRE(curl_recs.size() == div_recs.size());
  for (std::size_t i = 0; i < curl_recs.size(); ++i)
    CHECK(std::fabs(curl_recs[i].kappa - div_recs[i].kappa) <= 1e-8);
}

TEST_CASE("CSV round trip is exact") {
  SweepConfig cfg;
  cfg.form = FormKind::Curl;
  cfg.n_coarse = {2};
  cfg.refine = {0, 2};  // one failing tuple for the error column
  cfg.overlap_layers = {1};
  auto recs = run_sweep(cfg);
  auto parsed = parse_csv(emit_csv(recs));
  REQUIRE(parsed.size() == recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) CHECK(records_equal(recs[i], parsed[i]));

  for (const auto& r : recs)
    CHECK(r.ratio * r.overlap_layers == static_cast<double>(1 << r.refine));

  CHECK_THROWS_AS(parse_csv("bogus\n1,2\n"), std::invalid_argument);
}

TEST_CASE("fit_models on synthetic data") {
  auto make = [](double ratio, double kappa) {
    SweepRecord r;
    r.form = "curl";
    r.n_coarse = 4;
    r.refine = 4;
    r.overlap_layers = static_cast<int>(16.0 / ratio);
    r.ratio = ratio;
    r.kappa = kappa;
    r.eig_method = "lanczos";
    return r;
  };

  SUBCASE("exact linear growth") {
    std::vector<SweepRecord> recs;
    for (double rho : {2.0, 4.0, 8.0, 16.0}) recs.push_back(make(rho, 1.0 + rho));
    auto fits = fit_models(recs);
    REQUIRE(fits.size() == 1);
    CHECK(fits[0].c0_lin == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(fits[0].c1_lin == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(fits[0].r2_lin == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fits[0].r2_lin >= fits[0].r2_quad);
    REQUIRE(fits[0].growth_ratios.size() == 3);
    for (double g : fits[0].growth_ratios) CHECK(g < 2.0);
  }

  SUBCASE("exact quadratic growth") {
    std::vector<SweepRecord> recs;
    for (double rho : {2.0, 4.0, 8.0, 16.0}) recs.push_back(make(rho, rho * rho));
    auto fits = fit_models(recs);
    CHECK(fits[0].r2_quad == doctest::Approx(1.0).epsilon(1e-12));
    for (double g : fits[0].growth_ratios) CHECK(g == doctest::Approx(4.0).epsilon(1e-10));
  }

  SUBCASE("degenerate groups are rejected") {
    std::vector<SweepRecord> recs = {make(2.0, 3.0), make(2.0, 3.0), make(2.0, 3.0)};
    CHECK_THROWS_AS(fit_models(recs), std::invalid_argument);
  }

  SUBCASE("fits_json shape") {
    std::vector<SweepRecord> recs;
    for (double rho : {2.0, 4.0, 8.0}) recs.push_back(make(rho, 1.0 + rho));
    auto fits = fit_models(recs);
    std::string j = fits_json(fits);
    CHECK(j.find("\"groups\"") != std::string::npos);
    CHECK(j.find("\"r2_lin\"") != std::string::npos);
  }
}

TEST_CASE("verify report serializes") {
  VerifyReport rep;
  rep.level = VerifyLevel::Fast;
  rep.checks.push_back({"demo", true, "ok"});
  rep.all_passed = true;
  std::string j = rep.to_json();
  CHECK(j.find("\"level\":\"fast\"") != std::string::npos);
  CHECK(j.find("\"passed\":true") != std::string::npos);
  CHECK(j.find("\"demo\"") != std::string::npos);
}
