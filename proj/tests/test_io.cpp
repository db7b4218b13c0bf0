#include <doctest.h>

#include <cmath>
#include <unistd.h>
#include <filesystem>
#include <string>

#include "circlemaps/errors.hpp"
#include "circlemaps/io.hpp"
#include "support.hpp"

using namespace circlemaps;
namespace fs = std::filesystem;

namespace {
std::string parse_error(const std::string& text, bool skew = false) {
  try {
    if (skew)
      parse_skew_map(text, "def.json");
    else
      parse_family(text, "def.json");
  } catch (const ParseError& e) {
    return e.what();
  }
  return {};
}
}  // namespace

TEST_CASE("family definitions") {
  const CircleFamily f = parse_family(R"({"label": "a", "winding": 2, "const": [0, 0.01],
    "harmonics": [{"j": 1, "a": 0.01, "b": [0.02, 0.003]}]})");
  CHECK(f.label() == "a");
  CHECK(f.winding() == 2);
  CHECK(f.const_term() == TPoly{0.0, 0.01});
  REQUIRE(f.harmonics().size() == 1);
  CHECK(f.harmonics()[0].a == TPoly{0.01});
  CHECK(f.harmonics()[0].b == TPoly{0.02, 0.003});
  const SkewMap s = parse_skew_map(R"({"m": 3, "modes": [{"jx": 1, "jy": -1, "a": 0.01}]})");
  CHECK(s.m() == 3);
  REQUIRE(s.modes().size() == 1);
  CHECK(s.modes()[0].jy == -1);
}

TEST_CASE("schema errors name the source and location") {
  CHECK(parse_error(R"({"winding": 1, "harmonic": []})").find("def.json") == 0);
  CHECK(parse_error(R"({"winding": 1, "harmonic": []})").find("harmonic") != std::string::npos);
  CHECK(parse_error(R"({"winding": "x"})").find("/winding") != std::string::npos);
  CHECK(parse_error(R"({"winding": 1, "harmonics": [{"j": 1, "a": ["z"]}]})").find("/harmonics/0/a") !=
        std::string::npos);
  CHECK(parse_error("{\n  \"winding\": 1,\n}").find("def.json:3:") == 0);
  CHECK(parse_error(R"({"m": 1, "modes": []})", true).find("/m") != std::string::npos);
  CHECK(parse_error("[1, 2]").find("def.json") == 0);
}

TEST_CASE("git blob hash") {
  CHECK(git_blob_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
  CHECK(git_blob_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST_CASE("format_real round-trips") {
  support::for_all(500, 71, [](support::Gen& g) {
    const double v = g.uniform(-1, 1) * std::pow(10.0, g.integer(-30, 30));
    CHECK(std::stod(format_real(v)) == v);
  });
  CHECK(format_real(0.5) == "0.5");
}

TEST_CASE("csv quoting") {
  Csv c({"a", "b"});
  c.row({"1", "x,y"}).row({"say \"hi\"", ""});
  CHECK(c.str() == "a,b\n1,\"x,y\"\n\"say \"\"hi\"\"\",\n");
  CHECK_THROWS(c.row({"only one"}));
}

TEST_CASE("atomic writes and file reads") {
  const fs::path dir = fs::temp_directory_path() / ("circlemaps_io_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path file = dir / "out.csv";
  write_atomic(file, "first");
  write_atomic(file, "second");
  CHECK(read_file(file) == "second");
  int entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  CHECK(entries == 1);
  try {
    read_file(dir / "missing.json");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("missing.json") != std::string::npos);
  }
  fs::remove_all(dir);
}

TEST_CASE("report layout") {
  ExperimentReport r;
  r.id = "rho";
  r.parameters["qmax"] = 30;
  r.tables = {"rho.csv"};
  const auto j = nlohmann::json::parse(r.to_json());
  CHECK(j["experiment"] == "rho");
  CHECK(j["parameters"]["qmax"] == 30);
  CHECK(j["tables"][0] == "rho.csv");
  CHECK(j.contains("wall_clock_seconds"));
  CHECK(j.contains("version"));
}
