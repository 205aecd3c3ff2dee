#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "adiabatic/cli.hpp"
#include "adiabatic/eigensolver.hpp"
#include "adiabatic/model.hpp"

using adiabatic::cli::run;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "adiabatic_lab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream is(text);
  std::string l;
  while (std::getline(is, l)) v.push_back(l);
  return v;
}

std::vector<std::string> cells(const std::string& line) {
  std::vector<std::string> v;
  std::stringstream ss(line);
  std::string c;
  while (std::getline(ss, c, ',')) v.push_back(c);
  return v;
}

nlohmann::json footer(const std::string& text) {
  const auto l = lines(text);
  REQUIRE(!l.empty());
  REQUIRE(l.back().rfind("# meta: ", 0) == 0);
  return nlohmann::json::parse(l.back().substr(8));
}

}  // namespace

TEST_CASE("grid syntax") {
  using adiabatic::cli::parse_int_list;
  using adiabatic::cli::parse_real_grid;
  const auto g = parse_real_grid("0..1:5", 201);
  CHECK(g == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(parse_real_grid("0..1", 201).size() == 201);
  const auto l = parse_real_grid("0.5, 2,inf", 3);
  CHECK(l.size() == 3);
  CHECK(std::isinf(l[2]));
  CHECK(parse_int_list("100..1000") == std::vector<int>{100, 200, 300, 400, 500, 600, 700, 800, 900, 1000});
  CHECK(parse_int_list("2..10:9") == std::vector<int>{2, 3, 4, 5, 6, 7, 8, 9, 10});
  CHECK(parse_int_list("10,20,40") == std::vector<int>{10, 20, 40});
  CHECK_THROWS(parse_real_grid("0..1:0", 5));
  CHECK_THROWS(parse_real_grid("a,b", 5));
  CHECK_THROWS(parse_real_grid("nan", 5));
  CHECK_THROWS(parse_int_list("1.5,2"));
  CHECK_THROWS(parse_int_list("10..2"));
}

TEST_CASE("numbers round-trip") {
  for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0})
    CHECK(std::strtod(adiabatic::cli::format_number(x).c_str(), nullptr) == x);
  CHECK(adiabatic::cli::format_number(INFINITY) == "inf");
}

TEST_CASE("spectrum output shape") {
  const auto r = invoke({"spectrum", "--n", "10", "--alpha", "3"});
  REQUIRE(r.code == 0);
  const auto l = lines(r.out);
  CHECK(l.size() == 1 + 201 + 1);
  CHECK(cells(l[0]).size() == 12);
  CHECK(cells(l[0])[0] == "s");
  CHECK(cells(l[0])[11] == "E10");
  const auto meta = footer(r.out);
  CHECK(meta["command"] == "spectrum");
  CHECK(meta["params"]["n"] == 10);
  CHECK(meta.contains("version"));
  CHECK(meta.contains("tolerances"));

  // Values are printed with enough digits to reproduce the library result bit for bit.
  const auto row = cells(l[101]);
  const double s = std::strtod(row[0].c_str(), nullptr);
  CHECK(s == 0.5);
  const auto e = adiabatic::eigen_all(adiabatic::build_hs({10, 3.0, s})).values;
  for (int k = 0; k <= 10; ++k) CHECK(std::strtod(row[k + 1].c_str(), nullptr) == e[k]);
}

TEST_CASE("gap scaling summary") {
  const std::string path = "cli_gap_scaling_test.json";
  const auto r = invoke({"gap-scaling", "--alpha", "0", "--n", "100..1000", "--json", path});
  REQUIRE(r.code == 0);
  const auto meta = footer(r.out);
  CHECK(meta["results"]["model"] == "power");
  CHECK(std::abs(meta["results"]["exponent"].get<double>() - 1.0) < 0.05);
  std::ifstream f(path);
  REQUIRE(f.good());
  const auto doc = nlohmann::json::parse(f);
  CHECK(doc["fit"]["power"]["nu"] == meta["results"]["power"]["nu"]);
  CHECK(doc["minima"].size() == 10);
  f.close();
  std::remove(path.c_str());
}

TEST_CASE("oracle check passes") {
  const auto r = invoke({"oracle-check", "--n-max", "8"});
  CHECK(r.code == 0);
  CHECK(footer(r.out)["results"]["pass"] == true);
  CHECK(r.err.find("PASS") != std::string::npos);
  CHECK(lines(r.out).size() == 1 + 8 * 25 + 1);
}

TEST_CASE("output is independent of the worker count") {
  const std::vector<std::string> spec{"spectrum", "--n", "40", "--alpha", "4", "--s", "0..1:37"};
  const std::vector<std::string> conc{"concurrence", "--n", "50,100,200", "--alpha", "1,5", "--s", "0..1:9",
                                      "--extrapolate"};
  for (const auto& base : {spec, conc}) {
    auto one = base, four = base;
    one.insert(one.end(), {"--workers", "1"});
    four.insert(four.end(), {"--workers", "4"});
    const auto a = invoke(one), b = invoke(four);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("output file matches stdout") {
  const std::string path = "cli_output_test.csv";
  const auto a = invoke({"phase-diagram", "--alpha", "1,5", "--s", "0..1:11"});
  const auto b = invoke({"phase-diagram", "--alpha", "1,5", "--s", "0..1:11", "--output", path});
  REQUIRE(b.code == 0);
  CHECK(b.out.empty());
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == a.out);
  f.close();
  std::remove(path.c_str());
}

TEST_CASE("every subcommand ends with a meta footer") {
  const std::vector<std::vector<std::string>> calls{
      {"dos", "--n", "40", "--points", "11"},
      {"dos", "--n", "40", "--mode", "bins"},
      {"phase-diagram", "--alpha", "1,3", "--mode", "line"},
      {"anatomy", "--n", "12", "--alpha", "5", "--s", "0..1:21"},
      {"anatomy", "--n", "12", "--alpha", "5", "--s", "0.3", "--mode", "dicke"},
      {"anatomy", "--n", "30", "--alpha", "5", "--s", "0..1:201", "--mode", "anticrossings"},
      {"dynamics", "--n", "1,3", "--T", "0,10"},
      {"dynamics", "--n", "2,3", "--target", "0.9"},
  };
  for (const auto& c : calls) {
    const auto r = invoke(c);
    CAPTURE(c[0]);
    REQUIRE(r.code == 0);
    CHECK(footer(r.out)["command"] == c[0]);
  }
}

TEST_CASE("exit codes") {
  CHECK(invoke({"spectrum", "--n", "3"}).code == 1);
  CHECK(invoke({"spectrum", "--n", "3", "--alpha", "1", "--bogus"}).code == 1);
  CHECK(invoke({"no-such-command"}).code == 1);
  CHECK(invoke({"spectrum", "--n", "0", "--alpha", "1"}).code == 1);
  CHECK(invoke({"spectrum", "--n", "3", "--alpha", "-1"}).code == 1);
  CHECK(invoke({"spectrum", "--n", "3", "--alpha", "1", "--s", "0..2:3"}).code == 1);
  CHECK(invoke({"spectrum", "--n", "3", "--alpha", "1", "--output", "/nonexistent-dir/x.csv"}).code == 1);
  CHECK(invoke({"gap-scaling", "--alpha", "0", "--n", "10,20,30"}).code == 1);
  CHECK(invoke({"concurrence", "--n", "10,20", "--extrapolate"}).code == 1);
  const auto bracket = invoke({"dynamics", "--n", "8", "--target", "0.99", "--t-max", "4"});
  CHECK(bracket.code == 2);
  CHECK(bracket.err.find("bracket") != std::string::npos);
  CHECK(invoke({"spectrum", "--help"}).code == 0);
}

TEST_CASE("help documents the columns") {
  const auto r = invoke({"gap-scaling", "--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("Columns: n, s_star, gap_min") != std::string::npos);
}

TEST_CASE("worker override from the environment") {
  setenv("ADIABATIC_LAB_WORKERS", "zero", 1);
  CHECK(invoke({"spectrum", "--n", "3", "--alpha", "1"}).code == 1);
  setenv("ADIABATIC_LAB_WORKERS", "2", 1);
  CHECK(invoke({"spectrum", "--n", "3", "--alpha", "1"}).code == 0);
  unsetenv("ADIABATIC_LAB_WORKERS");
}
