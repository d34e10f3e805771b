#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rlab/cli.hpp"
#include "rlab/decomposition.hpp"
#include "rlab/errors.hpp"
#include "rlab/fundamental.hpp"
#include "rlab/io.hpp"
#include "rlab/operator_lq.hpp"
#include "rlab/potential.hpp"

namespace rlab::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kOraclePoints = 32;
constexpr double kOracleTol = 1e-10;
constexpr double kMinSlope = 0.9;
constexpr double kFloorRel = 1e-7;
constexpr std::size_t kMaxMollifyCells = 4000000;

struct NamedSource {
  std::string label;
  SourceMeasure measure;
};

Cell p_cell(double p) {
  if (std::isinf(p)) return std::string("inf");
  return p;
}

std::string join_point(const Vec& x) {
  std::string s;
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? " " : "") + format_double(x[i]);
  return s;
}

long long as_ll(std::size_t v) { return static_cast<long long>(v); }

// Sources for a lattice point of dimension n: the files given on the command
// line, or a built-in configuration.
std::vector<NamedSource> sources_for(const SweepConfig& cfg, int n,
                                     std::vector<NamedSource> (*fallback)(int)) {
  if (cfg.sources.empty()) return fallback(n);
  std::vector<NamedSource> out;
  for (const auto& path : cfg.sources) {
    SourceMeasure m = io::load_measure(path);
    if (source_dim(m) != static_cast<std::size_t>(n)) {
      throw UsageError("source '" + path.string() + "' has dimension " +
                       std::to_string(source_dim(m)) + " but the lattice asks for n = " +
                       std::to_string(n));
    }
    out.push_back({path.string(), std::move(m)});
  }
  return out;
}

std::vector<NamedSource> two_atoms(int n) {
  const auto dim = static_cast<std::size_t>(n);
  return {{"two-atom",
           AtomicMeasure({{1.0, Vec(dim)}, {0.5, Vec::unit(dim, 0)}})}};
}

std::vector<NamedSource> one_atom(int n) {
  return {{"one-atom", AtomicMeasure({{1.0, Vec(static_cast<std::size_t>(n))}})}};
}

void require_supported(const LatticePoint& lp) {
  if (lp.regime.tag == RegimeTag::Unsupported) {
    throw UsageError("unsupported parameters " + lp.params.describe() + ": " + lp.regime.reason);
  }
}

std::vector<Cell> param_cells(const std::string& label, const Params& prm) {
  return {label, static_cast<long long>(prm.n()), p_cell(prm.p()), prm.q(), prm.alpha(),
          static_cast<double>(prm.n()) - prm.alpha()};
}

// Largest per-term deviation between the factored and brute-force paths,
// relative to the term scale.
double oracle_deviation(const AtomicMeasure& atoms, const Vec& x, const Params& prm) {
  const Terms fact = terms_factored(compute_moments(atoms, x, prm.alpha()), prm);
  const Terms brute = terms_bruteforce(atoms, x, prm);
  const double scale = std::max({std::abs(fact.I1), std::abs(fact.I2), std::abs(fact.I3),
                                 std::abs(fact.total()), std::numeric_limits<double>::min()});
  return std::max({std::abs(fact.I1 - brute.I1), std::abs(fact.I2 - brute.I2),
                   std::abs(fact.I3 - brute.I3)}) /
         scale;
}

bool oracle_applicable(const Params& prm, RegimeTag tag) {
  return !prm.p_is_infinite() && tag != RegimeTag::Case3Log;
}

CommandResult certify_impl(const SweepConfig& cfg, bool skip_unsupported) {
  CommandResult res{"certify",
                    Table({"source", "n", "p", "q", "alpha", "riesz_order", "regime", "quantity",
                           "point_index", "x", "value", "expected", "violation", "verdict",
                           "oracle_deviation"}),
                    0,
                    {}};
  const double tol = cfg.tol.value_or(1e-9);
  double max_dev = 0.0;
  for (const auto& lp : expand_lattice(cfg)) {
    if (lp.regime.tag == RegimeTag::Unsupported && skip_unsupported) {
      res.notes.push_back("certify: skipped " + lp.params.describe() + ": " + lp.regime.reason);
      continue;
    }
    require_supported(lp);
    for (const auto& src : sources_for(cfg, lp.params.n(), two_atoms)) {
      const SignReport rep = certify_sign(src.measure, lp.params, cfg.cloud, tol);
      std::vector<bool> violated(rep.values.size(), false);
      for (const auto& v : rep.violations) violated[v.index] = true;
      const auto* atoms = std::get_if<AtomicMeasure>(&src.measure);
      const bool oracle = cfg.oracle && oracle_applicable(lp.params, lp.regime.tag);
      if (oracle && atoms == nullptr) throw UsageError("--oracle needs an atomic source");
      for (std::size_t i = 0; i < rep.values.size(); ++i) {
        double dev = kNaN;
        if (oracle && i < kOraclePoints) {
          dev = oracle_deviation(*atoms, rep.points[i], lp.params);
          max_dev = std::max(max_dev, dev);
        }
        auto row = param_cells(src.label, lp.params);
        row.insert(row.end(),
                   {std::string(to_string(lp.regime.tag)), rep.quantity, as_ll(i),
                    join_point(rep.points[i]), rep.values[i],
                    rep.expected ? Cell(std::string(to_string(*rep.expected))) : Cell{},
                    static_cast<long long>(violated[i]), std::string(to_string(rep.verdict)),
                    dev});
        res.table.add_row(std::move(row));
      }
      if (!rep.passed()) {
        res.exit_code = 2;
        res.notes.push_back("certify: " + std::to_string(rep.violations.size()) +
                            " sign violations for " + lp.params.describe() + " on " + src.label);
      }
    }
  }
  if (cfg.oracle) {
    res.notes.push_back("certify: max oracle deviation " + format_double(max_dev));
    if (max_dev > kOracleTol) res.exit_code = 2;
  }
  return res;
}

std::vector<Vec> mollify_probes(const AtomicMeasure& atoms) {
  const Vec c = atoms.centroid();
  double reach = 0.0;
  for (const auto& a : atoms.atoms()) reach = std::max(reach, norm(a.location - c));
  const std::size_t n = atoms.dim();
  const Vec diag(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<Vec> out;
  for (double d : {1.0, 1.5, 2.0}) {
    out.push_back(c + (reach + d) * Vec::unit(n, 0));
    out.push_back(c + (reach + d) * diag);
  }
  return out;
}

double nearest_atom(const AtomicMeasure& atoms, const Vec& x) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& a : atoms.atoms()) d = std::min(d, norm(x - a.location));
  return d;
}

CommandResult mollify_impl(const SweepConfig& cfg, bool skip_unsupported) {
  CommandResult res{"mollify-study",
                    Table({"kind", "source", "n", "p", "q", "alpha", "riesz_order", "t",
                           "probe_index", "distance", "u", "u_t", "abs_error", "slope", "floor",
                           "verdict", "violations"}),
                    0,
                    {}};
  if (cfg.levels < 2) throw UsageError("mollify-study needs at least two levels");
  if (!(cfg.t0 > 0.0)) throw UsageError("mollify-study needs t0 > 0");
  const double tol = cfg.tol.value_or(1e-9);
  for (const auto& lp : expand_lattice(cfg)) {
    if (lp.regime.tag == RegimeTag::Unsupported) {
      if (!skip_unsupported) require_supported(lp);
      res.notes.push_back("mollify-study: skipped " + lp.params.describe() + ": " +
                          lp.regime.reason);
      continue;
    }
    if (lp.params.alpha() >= lp.params.n() - 2.0) {
      const std::string why = "alpha >= n-2, so the Hessian of u_t diverges inside the support";
      if (!skip_unsupported) {
        throw UsageError("mollify-study: " + lp.params.describe() + ": " + why);
      }
      res.notes.push_back("mollify-study: skipped " + lp.params.describe() + ": " + why);
      continue;
    }
    const Params& prm = lp.params;
    for (const auto& src : sources_for(cfg, prm.n(), one_atom)) {
      const auto* atoms = std::get_if<AtomicMeasure>(&src.measure);
      if (atoms == nullptr) throw UsageError("mollify-study needs an atomic source");
      const auto probes = mollify_probes(*atoms);
      std::vector<double> exact;
      for (const auto& x : probes) exact.push_back(potential(*atoms, x, prm.alpha()));
      std::vector<double> prev_err(probes.size(), kNaN);
      std::vector<bool> prev_floor(probes.size(), false);
      double t = cfg.t0;
      for (int level = 0; level < cfg.levels; ++level, t /= 2.0) {
        const GridSpec grid = mollifier_grid(*atoms, t);
        if (grid.cell_count() > kMaxMollifyCells) {
          throw ResourceError("mollify-study: grid of " + std::to_string(grid.cell_count()) +
                              " cells at t = " + format_double(t) + " exceeds the limit");
        }
        const SourceMeasure smooth = mollify(*atoms, t, grid);
        for (std::size_t k = 0; k < probes.size(); ++k) {
          const double ut = potential(smooth, probes[k], prm.alpha());
          const double err = std::abs(ut - exact[k]);
          const bool floor = err <= kFloorRel * std::abs(exact[k]);
          double slope = kNaN;
          if (level > 0) slope = std::log(prev_err[k] / err) / std::log(2.0);
          if (level > 0 && !floor && !prev_floor[k] && !(slope >= kMinSlope)) {
            res.exit_code = 2;
            res.notes.push_back("mollify-study: slope " + format_double(slope) + " at t = " +
                                format_double(t) + ", probe " + std::to_string(k));
          }
          auto row = param_cells(src.label, prm);
          row.insert(row.begin(), std::string("probe"));
          row.insert(row.end(), {t, as_ll(k), nearest_atom(*atoms, probes[k]), exact[k], ut, err,
                                 slope, static_cast<long long>(floor), Cell{}, Cell{}});
          res.table.add_row(std::move(row));
          prev_err[k] = err;
          prev_floor[k] = floor;
        }
        const SignReport rep = certify_sign(smooth, prm, cfg.cloud, tol);
        if (!rep.passed()) {
          res.exit_code = 2;
          res.notes.push_back("mollify-study: sign violation at t = " + format_double(t) +
                              " for " + prm.describe());
        }
        auto row = param_cells(src.label, prm);
        row.insert(row.begin(), std::string("sign"));
        row.insert(row.end(), {t, Cell{}, Cell{}, Cell{}, Cell{}, Cell{}, Cell{}, Cell{},
                               std::string(to_string(rep.verdict)),
                               as_ll(rep.violations.size())});
        res.table.add_row(std::move(row));
      }
    }
  }
  return res;
}

}  // namespace

std::vector<LatticePoint> expand_lattice(const SweepConfig& cfg) {
  if (cfg.n.empty() || cfg.p.empty() || cfg.q.empty() || cfg.alpha.empty()) {
    throw UsageError("parameter lattice is empty");
  }
  std::vector<LatticePoint> out;
  for (int n : cfg.n) {
    for (double p : cfg.p) {
      for (double q : cfg.q) {
        for (const auto& a : cfg.alpha) {
          double alpha = 0.0;
          try {
            if (a) {
              alpha = *a;
            } else if (std::isinf(p)) {
              alpha = -1.0;
            } else if (p != static_cast<double>(n)) {
              alpha = alpha_threshold(n, p, q);
            }
            Params prm(n, p, q, alpha);
            Regime reg = classify_regime(prm);
            out.push_back({std::move(prm), std::move(reg)});
          } catch (const DomainError& e) {
            throw UsageError(e.what());
          }
        }
      }
    }
  }
  return out;
}

CommandResult cmd_fs_check(const SweepConfig& cfg) {
  CommandResult res{"fs-check",
                    Table({"n", "p", "q", "kind", "gamma", "poly_at_gamma", "radius", "I",
                           "scaled_residual", "weak_pairing", "c_poly", "c_exp", "within_tol"}),
                    0,
                    {}};
  const double tol = cfg.tol.value_or(1e-12);
  const std::vector<double> radii{0.5, 1.0, 2.0, 4.0};
  for (int n : cfg.n) {
    for (double p : cfg.p) {
      for (double q : cfg.q) {
        if (std::isinf(p)) throw UsageError("fs-check needs a finite p");
        FsCheck chk = [&] {
          try {
            return fs_check(n, p, q, radii, TestFunction::PolynomialBump);
          } catch (const DomainError& e) {
            throw UsageError(e.what());
          }
        }();
        double c_exp = kNaN;
        if (!chk.log_case && chk.gamma < 0.0) {
          c_exp = normalizing_constant(n, p, q, TestFunction::ExponentialBump);
        }
        for (const auto& r : chk.residuals) {
          const bool ok = std::abs(r.scaled) <= tol && std::abs(chk.poly_at_gamma) <= tol;
          if (!ok) res.exit_code = 2;
          res.table.add_row({static_cast<long long>(n), p, q,
                             std::string(chk.log_case ? "log" : "power"),
                             chk.log_case ? Cell{} : Cell(chk.gamma),
                             chk.log_case ? Cell{} : Cell(chk.poly_at_gamma), r.radius, r.I_value,
                             r.scaled, chk.weak_pairing_value, chk.c_normalized, c_exp,
                             static_cast<long long>(ok)});
        }
        if (chk.log_case && q != 1.0) {
          res.notes.push_back("fs-check: log(1/|x|) leaves I = (q-1)|x|^-4 for q != 1 (n = " +
                              std::to_string(n) + ", q = " + format_double(q) + ")");
        }
      }
    }
  }
  return res;
}

CommandResult cmd_certify(const SweepConfig& cfg) { return certify_impl(cfg, false); }

CommandResult cmd_decompose(const SweepConfig& cfg) {
  CommandResult res{"decompose",
                    Table({"source", "n", "p", "q", "alpha", "riesz_order", "regime", "lambda",
                           "point_index", "x", "I1", "I2", "I3", "I11_plus_I3", "I12_plus_I2",
                           "I_total", "residual_split", "residual_regroup", "expected",
                           "group11_ok", "group12_ok", "alpha_guard", "direct_terms_ok",
                           "oracle_deviation"}),
                    0,
                    {}};
  const double tol = cfg.tol.value_or(1e-10);
  double max_dev = 0.0;
  for (const auto& lp : expand_lattice(cfg)) {
    const Params& prm = lp.params;
    if (prm.p_is_infinite()) {
      res.notes.push_back("decompose: skipped " + prm.describe() + " (p = inf has no I)");
      continue;
    }
    for (const auto& src : sources_for(cfg, prm.n(), two_atoms)) {
      const auto points = make_cloud(src.measure, cfg.cloud);
      const auto* atoms = std::get_if<AtomicMeasure>(&src.measure);
      if (cfg.oracle && atoms == nullptr) throw UsageError("--oracle needs an atomic source");
      for (std::size_t i = 0; i < points.size(); ++i) {
        const DecompositionReport rep = decompose(src.measure, points[i], prm,
                                                  DecompositionPath::Factored, tol);
        const double scale = std::max(rep.scale(), std::numeric_limits<double>::min());
        const double split = rep.residual_split / scale;
        const double regroup = rep.residual_regroup / scale;
        double dev = kNaN;
        if (cfg.oracle && i < kOraclePoints) {
          dev = oracle_deviation(*atoms, points[i], prm);
          max_dev = std::max(max_dev, dev);
        }
        const bool guarded = rep.expected && rep.alpha_guard;
        bool bad = split > tol || regroup > tol;
        bad = bad || (guarded && !(rep.group11_ok && rep.group12_ok));
        bad = bad || (rep.direct_terms_ok && !*rep.direct_terms_ok);
        if (bad) res.exit_code = 2;
        auto row = param_cells(src.label, prm);
        row.insert(row.end(),
                   {std::string(to_string(lp.regime.tag)), prm.lambda(), as_ll(i),
                    join_point(points[i]), rep.terms.I1, rep.terms.I2, rep.terms.I3,
                    rep.groups.I11_plus_I3, rep.groups.I12_plus_I2, rep.I_total, split, regroup,
                    rep.expected ? Cell(std::string(to_string(*rep.expected))) : Cell{},
                    static_cast<long long>(rep.group11_ok), static_cast<long long>(rep.group12_ok),
                    static_cast<long long>(rep.alpha_guard),
                    rep.direct_terms_ok ? Cell(static_cast<long long>(*rep.direct_terms_ok))
                                        : Cell{},
                    dev});
        res.table.add_row(std::move(row));
      }
    }
  }
  if (cfg.oracle) {
    res.notes.push_back("decompose: max oracle deviation " + format_double(max_dev));
    if (max_dev > kOracleTol) res.exit_code = 2;
  }
  return res;
}

CommandResult cmd_mollify_study(const SweepConfig& cfg) { return mollify_impl(cfg, false); }

std::vector<CommandResult> cmd_sweep(const SweepConfig& cfg) {
  std::vector<CommandResult> out;
  SweepConfig fs = cfg;
  fs.p.erase(std::remove_if(fs.p.begin(), fs.p.end(), [](double p) { return std::isinf(p); }),
             fs.p.end());
  if (!fs.p.empty()) out.push_back(cmd_fs_check(fs));
  out.push_back(certify_impl(cfg, true));
  out.push_back(cmd_decompose(cfg));
  out.push_back(mollify_impl(cfg, true));
  return out;
}

const char* const kColumnHelp = R"(Output columns (long format, one row per evaluation):
  fs-check      n,p,q,kind(power|log),gamma,poly_at_gamma,radius,I,scaled_residual,
                weak_pairing,c_poly,c_exp,within_tol
                scaled_residual = I / r^(4 gamma - 4) (power) or I * r^4 (log).
  certify       source,n,p,q,alpha,riesz_order,regime,quantity,point_index,x,value,
                expected,violation,verdict,oracle_deviation
  decompose     source,n,p,q,alpha,riesz_order,regime,lambda,point_index,x,I1,I2,I3,
                I11_plus_I3,I12_plus_I2,I_total,residual_split,residual_regroup,expected,
                group11_ok,group12_ok,alpha_guard,direct_terms_ok,oracle_deviation
                residuals are relative to max(|I1|,|I2|,|I3|,|I_total|).
  mollify-study kind(probe|sign),source,n,p,q,alpha,riesz_order,t,probe_index,distance,
                u,u_t,abs_error,slope,floor,verdict,violations
  x is the evaluation point, space separated. riesz_order = n - alpha.
CSV output starts with a "# generated <UTC time>" line; JSON mirrors the rows.

Constant convention: the potential is u(x) = sum/int rho(y) |x-y|^(-alpha) with no
Riesz normalizing constant. A normalized Riesz potential of order n - alpha is a
positive multiple c*u, and I(c*u) = c^4 I(u), so no sign verdict depends on it.
Exit codes: 0 all checks pass, 2 mathematical violation, 1 usage or configuration error.)";

}  // namespace rlab::cli
