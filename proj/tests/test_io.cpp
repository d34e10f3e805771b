#include <cmath>
#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "rlab/errors.hpp"
#include "rlab/io.hpp"

TEST_CASE("atomic measure documents") {
  const auto m = rlab::io::parse_measure(R"({"atoms": [{"A": 2, "a": [0, 0, 0]},
                                                      {"A": 3, "a": [1, 0, 0]}]})");
  REQUIRE(std::holds_alternative<rlab::AtomicMeasure>(m));
  CHECK(rlab::total_mass(m) == 5.0);
  CHECK(rlab::source_dim(m) == 3);
  const auto again = rlab::io::parse_measure(rlab::io::dump_measure(m));
  CHECK(std::get<rlab::AtomicMeasure>(again).atoms()[1].location ==
        std::get<rlab::AtomicMeasure>(m).atoms()[1].location);
}

TEST_CASE("gridded measure documents") {
  const auto m = rlab::io::parse_measure(
      R"({"grid": {"origin": [0, 0, 0], "h": 0.5, "shape": [1, 1, 2], "values": [0, 8]}})");
  REQUIRE(std::holds_alternative<rlab::GriddedDensity>(m));
  const auto& g = std::get<rlab::GriddedDensity>(m);
  CHECK(g.total_mass() == 1.0);
  CHECK(g.grid().cell_center(1)[2] == 0.75);
  const auto again = rlab::io::parse_measure(rlab::io::dump_measure(m));
  CHECK(std::get<rlab::GriddedDensity>(again).values() == g.values());
}

TEST_CASE("malformed measure documents") {
  using rlab::ConfigError;
  using rlab::io::parse_measure;
  CHECK_THROWS_AS(parse_measure("{"), ConfigError);
  CHECK_THROWS_AS(parse_measure("[]"), ConfigError);
  CHECK_THROWS_AS(parse_measure(R"({"atoms": []})"), ConfigError);
  CHECK_THROWS_AS(parse_measure(R"({"atoms": [{"A": -1, "a": [0, 0, 0]}]})"), ConfigError);
  CHECK_THROWS_AS(parse_measure(R"({"atoms": [{"A": 1}]})"), ConfigError);
  CHECK_THROWS_AS(parse_measure(R"({"atoms": [{"A": 1, "a": [0]}], "grid": {}})"), ConfigError);
  CHECK_THROWS_AS(
      parse_measure(R"({"grid": {"origin": [0], "h": 1, "shape": [2], "values": [1]}})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_measure(R"({"grid": {"origin": [0], "h": 1, "shape": [-2], "values": [1, 1]}})"),
      ConfigError);
}

TEST_CASE("params documents") {
  const auto p = rlab::io::parse_params(R"({"n": 3, "p": 2, "q": 2, "alpha": 0.5})");
  CHECK(p.n() == 3);
  CHECK(p.m() == 2.0);
  const auto inf = rlab::io::parse_params(R"({"n": 4, "p": "inf", "q": 1, "alpha": -1})");
  CHECK(inf.p_is_infinite());
  const auto round = rlab::io::parse_params(rlab::io::dump_params(inf));
  CHECK(round.p_is_infinite());
  CHECK(round.alpha() == -1.0);
  CHECK_THROWS_AS(rlab::io::parse_params(R"({"n": 3, "p": 1, "q": 2, "alpha": 0.5})"),
                  rlab::ConfigError);
  CHECK_THROWS_AS(rlab::io::parse_params(R"({"n": 3.5, "p": 2, "q": 2, "alpha": 0.5})"),
                  rlab::ConfigError);
  CHECK_THROWS_AS(rlab::io::parse_params(R"({"n": 3, "p": "big", "q": 2, "alpha": 0.5})"),
                  rlab::ConfigError);
}

TEST_CASE("loading from disk") {
  const auto path = std::filesystem::temp_directory_path() / "rlab_io_measure.json";
  {
    std::ofstream out(path);
    out << R"({"atoms": [{"A": 1, "a": [0, 0, 0, 0]}]})";
  }
  CHECK(rlab::source_dim(rlab::io::load_measure(path)) == 4);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(rlab::io::load_measure(path), rlab::ConfigError);
}
