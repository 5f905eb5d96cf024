// ddschwarz: condition-number laboratory for the two-level overlapping
// Schwarz preconditioner on H(curl)/H(div) model problems.

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ddlab/assembly.hpp"
#include "ddlab/lab.hpp"
#include "ddlab/schwarz.hpp"

namespace {

ddlab::FormKind parse_form(const std::string& s) {
  return s == "div" ? ddlab::FormKind::Div : ddlab::FormKind::Curl;
}

ddlab::EigMethod parse_eig(const std::string& s) {
  if (s == "dense") return ddlab::EigMethod::Dense;
  if (s == "lanczos") return ddlab::EigMethod::Lanczos;
  return ddlab::EigMethod::Auto;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-level overlapping Schwarz condition-number laboratory"};
  app.require_subcommand(1);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run a (n, r, m) parameter sweep and emit CSV");
  std::string form = "curl", eig = "auto", out_path;
  std::vector<int> coarse, refine_list, overlap;
  double tol = 1e-10;
  std::uint64_t seed = 42;
  sweep->add_option("--form", form, "bilinear form")->check(CLI::IsMember({"curl", "div"}));
  sweep->add_option("--coarse", coarse, "coarse grid parameters n")->delimiter(',')->required();
  sweep->add_option("--refine", refine_list, "refinement levels r")->delimiter(',')->required();
  sweep->add_option("--overlap", overlap, "overlap layer counts m")->delimiter(',')->required();
  sweep->add_option("--eig", eig, "eigenvalue method")->check(CLI::IsMember({"auto", "dense", "lanczos"}));
  sweep->add_option("--tol", tol, "PCG relative residual tolerance");
  sweep->add_option("--seed", seed, "RNG seed for right-hand sides");
  sweep->add_option("--out", out_path, "CSV output path")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "run a single case and print its record");
  std::string s_form = "curl", s_eig = "auto";
  int s_n = 2, s_r = 2, s_m = 1;
  double s_tol = 1e-10;
  std::uint64_t s_seed = 42;
  std::string dump_mesh, dump_matrix, dump_subdomains;
  solve->add_option("--form", s_form, "bilinear form")->check(CLI::IsMember({"curl", "div"}));
  solve->add_option("--coarse", s_n, "coarse grid parameter n")->required();
  solve->add_option("--refine", s_r, "refinement level r")->required();
  solve->add_option("--overlap", s_m, "overlap layer count m")->required();
  solve->add_option("--eig", s_eig, "eigenvalue method")->check(CLI::IsMember({"auto", "dense", "lanczos"}));
  solve->add_option("--tol", s_tol, "PCG relative residual tolerance");
  solve->add_option("--seed", s_seed, "RNG seed");
  solve->add_option("--dump-mesh", dump_mesh, "debug: write the fine mesh as JSON");
  solve->add_option("--dump-matrix", dump_matrix, "debug: write A_h in coordinate text form");
  solve->add_option("--dump-subdomains", dump_subdomains,
                    "debug: write per-subdomain DOF counts and coloring as JSON");

  // verify
  auto* verify = app.add_subcommand("verify", "run the invariant suite");
  std::string level = "fast", verify_out;
  verify->add_option("--level", level, "suite level")->check(CLI::IsMember({"fast", "full"}));
  verify->add_option("--out", verify_out, "write the JSON summary to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage error
  }

  try {
    if (sweep->parsed()) {
      ddlab::SweepConfig cfg;
      cfg.form = parse_form(form);
      cfg.n_coarse = coarse;
      cfg.refine = refine_list;
      cfg.overlap_layers = overlap;
      cfg.eig_method = parse_eig(eig);
      cfg.tol = tol;
      cfg.seed = seed;
      cfg.output_path = out_path;
      auto records = ddlab::run_sweep(cfg);
      std::printf("wrote %zu records to %s\n", records.size(), out_path.c_str());
      try {
        auto fits = ddlab::fit_models(records);
        std::printf("%s\n", ddlab::fits_json(fits).c_str());
      } catch (const std::exception&) {
        // fewer than 3 distinct rho values per group: nothing to fit
      }
      return 0;
    }

    if (solve->parsed()) {
      ddlab::CaseSpec spec;
      spec.form = parse_form(s_form);
      spec.n = s_n;
      spec.r = s_r;
      spec.m = s_m;
      spec.eig = parse_eig(s_eig);
      spec.tol = s_tol;
      spec.seed = s_seed;
      ddlab::SweepRecord rec = ddlab::solve_case(spec);
      std::printf("%s", ddlab::emit_csv({&rec, 1}).c_str());
      if (!dump_mesh.empty() || !dump_matrix.empty() || !dump_subdomains.empty()) {
        ddlab::Mesh fine = ddlab::build_coarse(s_n);
        for (int i = 0; i < s_r; ++i) fine = ddlab::refine(fine);
        auto write_file = [](const std::string& path, const std::string& text) {
          std::ofstream out(path, std::ios::binary);
          if (!out) throw std::runtime_error("cannot open " + path);
          out << text;
        };
        if (!dump_mesh.empty()) write_file(dump_mesh, fine.to_json());
        if (!dump_matrix.empty()) {
          ddlab::SpaceKind kind =
              spec.form == ddlab::FormKind::Curl ? ddlab::SpaceKind::ND0 : ddlab::SpaceKind::RT0;
          ddlab::DofSpace space = ddlab::build_space(fine, kind);
          ddlab::SparseSymMatrix A = spec.form == ddlab::FormKind::Curl
                                         ? ddlab::assemble_curl(space)
                                         : ddlab::assemble_div(space);
          write_file(dump_matrix, A.coordinate_text());
        }
        if (!dump_subdomains.empty()) {
          ddlab::Decomposition dec = ddlab::build_decomposition(fine, s_m);
          std::string json = "{\"n_sub\":" + std::to_string(dec.n_sub) +
                             ",\"n_colors\":" + std::to_string(dec.n_colors) + ",\"dof_counts\":[";
          for (int i = 0; i < dec.n_sub; ++i)
            json += (i ? "," : "") + std::to_string(dec.sub_dofs[i].size());
          json += "],\"coloring\":[";
          for (int i = 0; i < dec.n_sub; ++i)
            json += (i ? "," : "") + std::to_string(dec.coloring[i]);
          json += "]}";
          write_file(dump_subdomains, json);
        }
      }
      return 0;
    }

    // verify
    ddlab::VerifyLevel lv = level == "full" ? ddlab::VerifyLevel::Full : ddlab::VerifyLevel::Fast;
    ddlab::VerifyReport report = ddlab::run_verify(lv);
    for (const auto& c : report.checks)
      std::printf("%s %s (%s)\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    std::printf("%s\n", report.to_json().c_str());
    if (!verify_out.empty()) {
      FILE* f = std::fopen(verify_out.c_str(), "wb");
      if (!f) {
        std::fprintf(stderr, "cannot open %s\n", verify_out.c_str());
        return 2;
      }
      std::fputs(report.to_json().c_str(), f);
      std::fclose(f);
    }
    return report.all_passed ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
