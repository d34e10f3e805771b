#include <cmath>
#include <sstream>

#include <doctest.h>

#include "rlab/cli.hpp"
#include "rlab/errors.hpp"

using rlab::cli::SweepConfig;

namespace {

std::vector<double> column(const rlab::cli::Table& t, const std::string& name) {
  const auto k = t.column_index(name);
  std::vector<double> out;
  for (const auto& row : t.rows()) {
    if (const auto* d = std::get_if<double>(&row[k])) out.push_back(*d);
  }
  return out;
}

std::string body(const std::string& text) { return text.substr(text.find('\n') + 1); }

SweepConfig small_cloud() {
  SweepConfig cfg;
  cfg.cloud.count = 200;
  return cfg;
}

}  // namespace

TEST_CASE("format_double round-trips") {
  CHECK(rlab::cli::format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(rlab::cli::format_double(M_PI)) == M_PI);
  CHECK(rlab::cli::format_double(NAN) == "nan");
}

TEST_CASE("lattice expansion with auto alpha") {
  SweepConfig cfg;
  cfg.n = {3};
  cfg.p = {2.0, 3.0, 5.0, rlab::Params::kInfinity};
  cfg.q = {1.0};
  const auto pts = rlab::cli::expand_lattice(cfg);
  REQUIRE(pts.size() == 4);
  CHECK(pts[0].params.alpha() == 1.0);
  CHECK(pts[1].regime.tag == rlab::RegimeTag::Case3Log);
  CHECK(pts[2].params.alpha() == -0.5);
  CHECK(pts[2].regime.tag == rlab::RegimeTag::Case2Sub);
  CHECK(pts[3].params.alpha() == -1.0);
  CHECK(pts[3].regime.tag == rlab::RegimeTag::InfSub);
  cfg.n.clear();
  CHECK_THROWS_AS(rlab::cli::expand_lattice(cfg), rlab::UsageError);
}

TEST_CASE("fs-check examples") {
  SweepConfig cfg;
  cfg.p = {2.0};
  cfg.q = {1.0};
  auto r = rlab::cli::cmd_fs_check(cfg);
  CHECK(r.exit_code == 0);
  CHECK(column(r.table, "gamma").front() == -1.0);

  cfg.q = {2.0};
  CHECK(rlab::cli::cmd_fs_check(cfg).exit_code == 0);

  cfg.p = {3.0};
  cfg.q = {1.0};
  r = rlab::cli::cmd_fs_check(cfg);
  CHECK(r.exit_code == 0);
  const auto kind = r.table.column_index("kind");
  CHECK(std::get<std::string>(r.table.rows()[0][kind]) == "log");
}

TEST_CASE("certify: PME pair passes, unsupported parameters are usage errors") {
  SweepConfig cfg = small_cloud();
  cfg.alpha = {0.5};
  auto r = rlab::cli::cmd_certify(cfg);
  CHECK(r.exit_code == 0);
  CHECK(r.table.rows().size() >= 200);
  const auto viol = r.table.column_index("violation");
  for (const auto& row : r.table.rows()) CHECK(std::get<long long>(row[viol]) == 0);

  cfg.q = {0.5};
  try {
    (void)rlab::cli::cmd_certify(cfg);
    FAIL("expected UsageError");
  } catch (const rlab::UsageError& e) {
    CHECK(std::string(e.what()).find("q >= 1") != std::string::npos);
  }
}

TEST_CASE("certify --oracle") {
  SweepConfig cfg = small_cloud();
  cfg.p = {2.5, 5.0};
  cfg.q = {1.0};
  cfg.oracle = true;
  const auto r = rlab::cli::cmd_certify(cfg);
  CHECK(r.exit_code == 0);
  const auto dev = column(r.table, "oracle_deviation");
  std::size_t finite = 0;
  for (double d : dev) {
    if (std::isfinite(d)) {
      ++finite;
      CHECK(d <= 1e-10);
    }
  }
  CHECK(finite == 64);
}

TEST_CASE("decompose columns") {
  SweepConfig cfg = small_cloud();
  cfg.p = {2.0};
  cfg.q = {1.0};
  auto r = rlab::cli::cmd_decompose(cfg);
  CHECK(r.exit_code == 0);
  for (double v : column(r.table, "I2")) CHECK(v == 0.0);
  for (double v : column(r.table, "I3")) CHECK(v == 0.0);

  cfg.p = {5.0};
  cfg.q = {1.0, 0.5};
  r = rlab::cli::cmd_decompose(cfg);
  CHECK(r.exit_code == 0);
  for (double v : column(r.table, "residual_regroup")) CHECK(v <= 1e-10);
  const auto g11 = column(r.table, "I11_plus_I3");
  const auto g12 = column(r.table, "I12_plus_I2");
  double scale = 0.0;
  for (double v : column(r.table, "I_total")) scale = std::max(scale, std::abs(v));
  for (double v : g11) CHECK(v >= -1e-10 * scale);
  for (double v : g12) CHECK(v >= -1e-10 * scale);
}

TEST_CASE("mollify-study") {
  SweepConfig cfg = small_cloud();
  cfg.alpha = {0.5};
  cfg.levels = 4;
  const auto r = rlab::cli::cmd_mollify_study(cfg);
  CHECK(r.exit_code == 0);
  const auto kind = r.table.column_index("kind");
  const auto verdict = r.table.column_index("verdict");
  const auto slope = r.table.column_index("slope");
  std::size_t signs = 0;
  for (const auto& row : r.table.rows()) {
    if (std::get<std::string>(row[kind]) == "sign") {
      ++signs;
      CHECK(std::get<std::string>(row[verdict]) == "PASS");
    } else if (const auto* s = std::get_if<double>(&row[slope]); s && std::isfinite(*s)) {
      CHECK(*s >= 0.9);
    }
  }
  CHECK(signs == 4);
}

TEST_CASE("output is deterministic apart from the timestamp line") {
  SweepConfig cfg = small_cloud();
  cfg.alpha = {0.5};
  const auto a = rlab::cli::cmd_certify(cfg);
  const auto b = rlab::cli::cmd_certify(cfg);
  std::ostringstream sa, sb;
  rlab::cli::emit(a, cfg, sa, "t1");
  rlab::cli::emit(b, cfg, sb, "t2");
  CHECK(sa.str() != sb.str());
  CHECK(body(sa.str()) == body(sb.str()));
  CHECK(sa.str().rfind("# generated t1\n", 0) == 0);

  cfg.format = rlab::cli::Format::Json;
  std::ostringstream ja, jb;
  rlab::cli::emit(a, cfg, ja, "t1");
  rlab::cli::emit(b, cfg, jb, "t2");
  CHECK(body(ja.str()) == body(jb.str()));
  CHECK(ja.str().find("\"rows\"") != std::string::npos);
}

TEST_CASE("sweep runs every command") {
  SweepConfig cfg = small_cloud();
  cfg.q = {1.0, 2.0};
  cfg.levels = 2;
  const auto all = rlab::cli::cmd_sweep(cfg);
  REQUIRE(all.size() == 4);
  CHECK(all[0].command == "fs-check");
  CHECK(all[3].command == "mollify-study");
  for (const auto& r : all) CHECK(r.exit_code == 0);
  // q = 1 gives auto alpha = n-2, which mollify-study skips
  CHECK_FALSE(all[3].notes.empty());
}
