#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gaussmax/commands.hpp"

using namespace gaussmax;
using std::numbers::pi;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "gaussmax");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("gaussmax_cli_test_" + name);
}

}  // namespace

TEST_CASE("moments for an AR(1) segment") {
  const auto r = run({"moments", "--ell", "2", "--rho", "0"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"ell", "method", "mean", "second_moment", "variance"});
  CHECK(std::stod(rows[1][2]) == doctest::Approx(0.5641895835477563).epsilon(1e-15));
  CHECK(std::stod(rows[1][3]) == 1.0);
  CHECK(std::stod(rows[1][4]) == doctest::Approx(1 - 1 / pi).epsilon(1e-15));
  CHECK(rows[1][2] == "0.56418958354775628");  // 17 significant digits
}

TEST_CASE("moments json at ell = 6 omits the mean") {
  const auto r = run({"moments", "--ell", "6", "--rho", "0", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK_FALSE(j.contains("mean"));
  CHECK_FALSE(j.contains("variance"));
  CHECK(j["second_moment"].get<double>() == doctest::Approx(2.021739069357418).epsilon(1e-14));
  CHECK(j["ell"] == 6);
}

TEST_CASE("moments from a matrix file") {
  const auto path = temp_path("id4.txt");
  {
    std::ofstream f(path);
    f << "# identity\n4\n1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n";
  }
  const auto a = run({"moments", "--ell", "4", "--matrix", path.string()});
  const auto b = run({"moments", "--ell", "4", "--rho", "0"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(run({"moments", "--matrix", path.string()}).out == b.out);
  CHECK(run({"moments", "--ell", "3", "--matrix", path.string()}).code == 2);
  std::filesystem::remove(path);
  CHECK(run({"moments", "--matrix", path.string()}).code == 4);

  const auto bad = temp_path("notpsd.txt");
  {
    std::ofstream f(bad);
    f << "3\n1 -0.9 -0.9\n-0.9 1 -0.9\n-0.9 -0.9 1\n";
  }
  const auto r = run({"moments", "--matrix", bad.string()});
  CHECK(r.code == 3);
  CHECK(r.err.find("positive semidefinite") != std::string::npos);
  std::filesystem::remove(bad);
}

TEST_CASE("moments usage and domain errors") {
  CHECK(run({"moments", "--ell", "3"}).code == 2);
  CHECK(run({"moments", "--ell", "3", "--rho", "0.1", "--matrix", "x"}).code == 2);
  CHECK(run({"moments", "--ell", "3", "--rho", "1.0"}).code == 3);
  CHECK(run({"moments", "--ell", "7", "--rho", "0.1"}).code == 3);
  CHECK(run({"moments", "--ell", "3", "--rho", "abc"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  const auto e = run({"moments", "--ell", "3"});
  CHECK(std::count(e.err.begin(), e.err.end(), '\n') == 1);
}

TEST_CASE("sweep csv") {
  const auto r = run({"sweep", "--ell", "3", "--min", "-0.99", "--max", "0.99", "--step", "0.01"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 200);
  CHECK(rows[0] == std::vector<std::string>{"rho", "ell", "mean", "second_moment", "variance"});
  std::size_t best = 1;
  for (std::size_t i = 2; i < rows.size(); ++i)
    if (std::stod(rows[i][2]) > std::stod(rows[best][2])) best = i;
  CHECK(std::stod(rows[best][0]) == doctest::Approx(-0.62));

  for (std::size_t i = 1; i < rows.size(); ++i) {
    // Round trip: the serialized columns reproduce the variance column.
    const double mean = std::stod(rows[i][2]);
    const double second = std::stod(rows[i][3]);
    const double variance = std::stod(rows[i][4]);
    const double recomputed = second - mean * mean;
    CHECK(std::abs(recomputed - variance) <= std::nextafter(std::abs(variance), 2.0) - std::abs(variance));
  }
}

TEST_CASE("sweep ell = 2 variance slope and ell = 6 empty mean") {
  const auto two = parse_csv(run({"sweep", "--ell", "2", "--min", "-0.9", "--max", "0.9", "--step", "0.1"}).out);
  for (std::size_t i = 2; i < two.size(); ++i) {
    const double slope = (std::stod(two[i][4]) - std::stod(two[i - 1][4])) /
                         (std::stod(two[i][0]) - std::stod(two[i - 1][0]));
    CHECK(slope == doctest::Approx(1 / pi).epsilon(1e-12));
  }
  const auto six = parse_csv(run({"sweep", "--ell", "6", "--min", "-0.5", "--max", "0.5", "--step", "0.5"}).out);
  REQUIRE(six.size() == 4);
  for (std::size_t i = 1; i < six.size(); ++i) {
    CHECK(six[i][2].empty());
    CHECK(six[i][4].empty());
    CHECK_FALSE(six[i][3].empty());
  }
}

TEST_CASE("sweep to a file and I/O failures") {
  const auto path = temp_path("sweep.csv");
  const auto r = run({"sweep", "--ell", "4", "--min", "-0.5", "--max", "0.5", "--step", "0.25", "--out", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(parse_csv(buf.str()).size() == 6);
  std::filesystem::remove(path);

  const auto bad = run({"sweep", "--ell", "4", "--min", "-0.5", "--max", "0.5", "--step", "0.25", "--out",
                        "/nonexistent-dir/x.csv"});
  CHECK(bad.code == 4);
  CHECK(run({"sweep", "--ell", "4", "--min", "-1", "--max", "0.5", "--step", "0.25"}).code == 3);
  CHECK(run({"sweep", "--ell", "4", "--min", "-0.5"}).code == 2);
}

TEST_CASE("maximize") {
  const auto m = parse_csv(run({"maximize", "--ell", "3", "--target", "mean"}).out);
  CHECK(std::stod(m[1][2]) == doctest::Approx(-0.6180339887).epsilon(1e-10));
  const auto s = parse_csv(run({"maximize", "--ell", "4", "--target", "second"}).out);
  CHECK(s[1][1] == "second_moment");
  CHECK(std::stod(s[1][2]) == doctest::Approx(-0.3879232988).epsilon(1e-10));
  const auto j = nlohmann::json::parse(run({"maximize", "--ell", "5", "--format", "json"}).out);
  CHECK(j["rho_star"].get<double>() == doctest::Approx(-0.4336476843).epsilon(1e-10));
  CHECK(j["evaluations"].get<int>() > 0);

  const auto two = run({"maximize", "--ell", "2", "--target", "mean"});
  CHECK(two.code == 3);
  CHECK(two.err.find("no interior maximum for ell=2") != std::string::npos);
  const auto six = run({"maximize", "--ell", "6", "--target", "mean"});
  CHECK(six.code == 3);
  CHECK(run({"maximize", "--ell", "4", "--target", "median"}).code == 2);
}

TEST_CASE("verify") {
  const auto a = run({"verify", "--ell", "5", "--rho", "-0.4336", "--samples", "1000000", "--seed", "42"});
  CHECK(a.code == 0);
  CHECK(parse_csv(a.out).size() == 4);
  const auto b = run({"verify", "--ell", "3", "--rho", "0.9", "--samples", "1000000", "--seed", "7"});
  CHECK(b.code == 0);
  CHECK(run({"verify", "--ell", "3", "--rho", "0.9", "--samples", "100"}).code == 2);

  const auto j = nlohmann::json::parse(
      run({"verify", "--ell", "6", "--rho", "0.2", "--samples", "20000", "--seed", "3", "--format", "json"}).out);
  CHECK(j["quantities"].size() == 1);
  CHECK(j["quantities"][0]["quantity"] == "second_moment");
  CHECK(j["samples"] == 20000);
}

TEST_CASE("identical arguments give byte-identical output") {
  const std::vector<std::string> args{"verify", "--ell", "4", "--rho", "0.3", "--samples", "50000", "--seed", "11"};
  CHECK(run(args).out == run(args).out);
  const std::vector<std::string> sw{"sweep", "--ell", "5", "--min", "-0.3", "--max", "0.3", "--step", "0.1"};
  CHECK(run(sw).out == run(sw).out);
}
