#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>

#include "rlab/cli.hpp"
#include "rlab/errors.hpp"
#include "rlab/params.hpp"

namespace {

using rlab::cli::CommandResult;
using rlab::cli::SweepConfig;

struct RawFlags {
  std::vector<int> n{3};
  std::vector<std::string> p{"2"};
  std::vector<double> q{2.0};
  std::vector<std::string> alpha{"auto"};
  std::vector<std::string> sources;
  std::size_t cloud_count = 1000;
  std::uint64_t seed = 1;
  double min_atom_distance = 1e-3;
  double tol = -1.0;
  bool oracle = false;
  std::string format = "csv";
  std::string out;
  double t0 = 0.04;
  int levels = 5;
};

void add_common(CLI::App* cmd, RawFlags& f) {
  cmd->add_option("--n", f.n, "Dimensions (comma separated)")->delimiter(',');
  cmd->add_option("--p", f.p, "Values of p, or inf (comma separated)")->delimiter(',');
  cmd->add_option("--q", f.q, "Values of q (comma separated)")->delimiter(',');
  cmd->add_option("--alpha", f.alpha, "Kernel exponents, or auto for the threshold")
      ->delimiter(',');
  cmd->add_option("--source", f.sources, "Measure JSON file (repeatable)");
  cmd->add_option("--cloud-count", f.cloud_count, "Quasi-random evaluation points per source");
  cmd->add_option("--seed", f.seed, "Seed for the point cloud");
  cmd->add_option("--min-atom-distance", f.min_atom_distance,
                  "Cloud points closer than this to an atom are rejected");
  cmd->add_option("--tol", f.tol, "Relative tolerance (command default when omitted)");
  cmd->add_flag("--oracle", f.oracle, "Cross-check with brute-force quadruple sums");
  cmd->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", f.out, "Output path (stdout when omitted)");
  cmd->add_option("--t0", f.t0, "mollify-study: largest time");
  cmd->add_option("--levels", f.levels, "mollify-study: number of halvings of t");
}

SweepConfig to_config(const RawFlags& f) {
  SweepConfig cfg;
  cfg.n = f.n;
  cfg.p.clear();
  for (const auto& s : f.p) cfg.p.push_back(rlab::parse_p(s));
  cfg.q = f.q;
  cfg.alpha.clear();
  for (const auto& s : f.alpha) {
    if (s == "auto") {
      cfg.alpha.push_back(std::nullopt);
      continue;
    }
    try {
      std::size_t used = 0;
      const double a = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      cfg.alpha.push_back(a);
    } catch (const std::exception&) {
      throw rlab::UsageError("--alpha expects numbers or auto, got '" + s + "'");
    }
  }
  for (const auto& s : f.sources) cfg.sources.emplace_back(s);
  cfg.cloud.count = f.cloud_count;
  cfg.cloud.seed = f.seed;
  cfg.cloud.min_atom_distance = f.min_atom_distance;
  if (f.tol > 0.0) cfg.tol = f.tol;
  cfg.oracle = f.oracle;
  cfg.format = f.format == "json" ? rlab::cli::Format::Json : rlab::cli::Format::Csv;
  if (!f.out.empty()) cfg.out = f.out;
  cfg.t0 = f.t0;
  cfg.levels = f.levels;
  return cfg;
}

void apply_thread_env() {
  const char* env = std::getenv("RIESZ_LAB_THREADS");
  if (env == nullptr || *env == '\0') return;
  char* end = nullptr;
  const long k = std::strtol(env, &end, 10);
  if (*end != '\0' || k < 1) {
    throw rlab::ConfigError(std::string("RIESZ_LAB_THREADS must be a positive integer, got '") +
                            env + "'");
  }
  omp_set_num_threads(static_cast<int>(k));
}

int finish(const CommandResult& r, const SweepConfig& cfg, const std::string& generated) {
  rlab::cli::emit(r, cfg, std::cout, generated);
  for (const auto& note : r.notes) std::cerr << note << '\n';
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for Riesz-type potentials and the operator "
               "div(u^(q-1) |grad u|^(p-2) grad u)"};
  app.footer(rlab::cli::kColumnHelp);
  app.require_subcommand(1);
  RawFlags flags;
  auto* fs = app.add_subcommand("fs-check", "Residual of I on the radial fundamental solution");
  auto* certify = app.add_subcommand("certify", "Sign certification of I over a point cloud");
  auto* decompose = app.add_subcommand("decompose", "Per-point I1/I2/I3 and group sums");
  auto* mollify = app.add_subcommand("mollify-study", "Convergence of heat-smoothed sources");
  auto* sweep = app.add_subcommand("sweep", "Run every command over the lattice");
  for (auto* cmd : {fs, certify, decompose, mollify, sweep}) {
    add_common(cmd, flags);
    cmd->footer(rlab::cli::kColumnHelp);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    apply_thread_env();
    const SweepConfig cfg = to_config(flags);
    const std::string generated = rlab::cli::utc_timestamp();
    if (*fs) return finish(rlab::cli::cmd_fs_check(cfg), cfg, generated);
    if (*certify) return finish(rlab::cli::cmd_certify(cfg), cfg, generated);
    if (*decompose) return finish(rlab::cli::cmd_decompose(cfg), cfg, generated);
    if (*mollify) return finish(rlab::cli::cmd_mollify_study(cfg), cfg, generated);
    int code = 0;
    for (const auto& r : rlab::cli::cmd_sweep(cfg)) {
      SweepConfig each = cfg;
      if (cfg.out) {
        auto path = *cfg.out;
        const auto ext = path.extension();
        path.replace_extension();
        path += "." + r.command;
        path += ext;
        each.out = path;
      }
      code = std::max(code, finish(r, each, generated));
    }
    return code;
  } catch (const rlab::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
