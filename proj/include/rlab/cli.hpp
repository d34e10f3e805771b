#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rlab/cloud.hpp"
#include "rlab/params.hpp"
#include "rlab/sources.hpp"

namespace rlab::cli {

enum class Format { Csv, Json };

using Cell = std::variant<std::monostate, long long, double, std::string>;

/// Long-format table. Rows are appended in a deterministic order by a single
/// writer; doubles print with %.17g so runs with the same seed are
/// byte-identical apart from the "# generated" header line.
class Table {
 public:
  explicit Table(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  std::size_t column_index(const std::string& name) const;

  void add_row(std::vector<Cell> row);

  void write_csv(std::ostream& out, const std::string& generated) const;
  void write_json(std::ostream& out, const std::string& command,
                  const std::string& generated) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

std::string format_double(double v);
std::string format_cell(const Cell& c);
std::string utc_timestamp();

/// Parameter lattice and run settings shared by every command.
struct SweepConfig {
  std::vector<int> n{3};
  std::vector<double> p{2.0};
  std::vector<double> q{2.0};
  /// nullopt = "auto": alpha_threshold (or -1 when p = inf).
  std::vector<std::optional<double>> alpha{std::nullopt};
  std::vector<std::filesystem::path> sources;
  SampleSpec cloud;
  std::optional<double> tol;
  bool oracle = false;
  Format format = Format::Csv;
  std::optional<std::filesystem::path> out;
  // mollify-study
  double t0 = 0.04;
  int levels = 5;
};

struct LatticePoint {
  Params params;
  Regime regime;
};

/// Expands the lattice and classifies every point. "auto" alpha needs a
/// threshold; p = n takes alpha = 0 (the log potential ignores it).
std::vector<LatticePoint> expand_lattice(const SweepConfig& cfg);

struct CommandResult {
  std::string command;
  Table table;
  int exit_code = 0;  // 0 pass, 2 violation
  std::vector<std::string> notes;
};

/// Radial residual rows for the power (p != n) or log (p = n) fundamental
/// solution at radii 0.5, 1, 2, 4. Default tolerance 1e-12.
CommandResult cmd_fs_check(const SweepConfig& cfg);
/// Sign certification per source x lattice point. Throws UsageError naming the
/// violated hypothesis for unsupported parameters. Default tolerance 1e-9.
CommandResult cmd_certify(const SweepConfig& cfg);
/// Per-point decomposition terms, group sums and residuals. Default tolerance 1e-10.
CommandResult cmd_decompose(const SweepConfig& cfg);
/// |u_t - u| at probe points for t = t0, t0/2, ... and sign verdicts of each
/// mollified density. Default tolerance 1e-9 (sign checks).
CommandResult cmd_mollify_study(const SweepConfig& cfg);
/// Every command over the same lattice; unsupported lattice points are noted
/// and skipped by the sign-checking commands.
std::vector<CommandResult> cmd_sweep(const SweepConfig& cfg);

/// Writes a result to cfg.out (or `fallback` when unset) in cfg.format.
void emit(const CommandResult& result, const SweepConfig& cfg, std::ostream& fallback,
          const std::string& generated);

/// Column reference printed by --help.
extern const char* const kColumnHelp;

}  // namespace rlab::cli
