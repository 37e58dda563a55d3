#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "builders.hpp"
#include "cli.hpp"
#include "json.hpp"
#include "quasirand/graph_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = quasirand::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "quasirand_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("oracle min-uk") {
  const auto r = run({"oracle", "min-uk", "--n", "5", "--p", "1/2", "--k", "2"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["min"].get<double>() == 0);
  CHECK(j["witness_edges"] == 5);
}

TEST_CASE("measure is idempotent") {
  const auto path = scratch("g.g6");
  quasirand::write_graph(path, quasirand::sample_gnp(40, quasirand::EdgeProbability::from_double(0.5),
                                                     quasirand::Seed{1}),
                         quasirand::GraphFormat::kGraph6);
  const auto a = run({"measure", "--in", path.string(), "--p", "0.5", "--k", "4"});
  const auto b = run({"measure", "--in", path.string(), "--p", "0.5", "--k", "4"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto j = json::parse(a.out);
  CHECK(j["parameters"]["k"] == 4);
  CHECK(j["classes"].size() == 11);
  CHECK(j.contains("u_k"));

  const auto exact = json::parse(run({"measure", "--in", path.string(), "--p", "1/2", "--k", "3"}).out);
  CHECK(exact.contains("u_k_exact"));
  CHECK(exact["u_k"].get<double>() == doctest::Approx(
                                           json::parse(run({"measure", "--in", path.string(), "--p", "0.5", "--k", "3"}).out)["u_k"].get<double>()));
}

TEST_CASE("exit codes and error JSON") {
  auto r = run({"construct", "--n", "100"});
  CHECK(r.code == 2);
  CHECK(json::parse(r.err).contains("error"));

  r = run({"construct", "--n", "100", "--seed", "1", "--p", "abc"});
  CHECK(r.code == 2);

  r = run({"construct", "--n", "100", "--p", "0.001", "--seed", "1"});
  CHECK(r.code == 3);
  CHECK(json::parse(r.err)["error"] == "precondition");

  r = run({"construct", "--n", "60", "--seed", "1", "--retries", "2"});
  CHECK(r.code == 4);

  r = run({"oracle", "min-uk", "--n", "9", "--k", "4"});
  CHECK(r.code == 3);

  r = run({"schatten", "--n", "4", "--s", "5"});
  CHECK(r.code == 2);

  r = run({"schatten", "--n", "4", "--construction", "looprandom"});
  CHECK(r.code == 2);

  r = run({"bogus"});
  CHECK(r.code == 2);
}

TEST_CASE("schatten and identities") {
  auto r = run({"schatten", "--n", "10", "--p", "0.3", "--s", "6"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["norm"].get<double>() == doctest::Approx(0.3).epsilon(1e-12));

  r = run({"schatten", "--n", "10", "--p", "0.3", "--bipartite", "2,4"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["norm"].get<double>() == doctest::Approx(std::pow(0.3, 4.0 / 3)));

  r = run({"identities", "--n", "9", "--seed", "2", "--p", "2/5"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["decomposition_max_abs"].get<double>() == 0);
  CHECK(j["signed_square_residual"].get<double>() == 0);
  CHECK(j["parameters"]["seed"] == 2);
}

TEST_CASE("construct writes graph and report") {
  const auto graph = scratch("c.g6");
  const auto report = scratch("c.json");
  const auto r = run({"construct", "--n", "400", "--seed", "1", "--out", graph.string(), "--report",
                      report.string()});
  REQUIRE(r.code == 0);
  std::ifstream in(report);
  const auto j = json::parse(in);
  CHECK(j["parameters"]["seed"] == 1);
  CHECK(j["parameters"]["n"] == 400);
  CHECK_FALSE(j.contains("trajectory"));
  CHECK(quasirand::read_graph(graph).edge_count() == j["edges"].get<std::int64_t>());
}

TEST_CASE("sweep CSV schema") {
  std::ifstream gold(std::string(QUASIRAND_GOLDEN_DIR) + "/sweep_header.csv");
  std::string header;
  std::getline(gold, header);

  const auto csv = scratch("sweep.csv");
  const auto cells = scratch("cells");
  const auto r = run({"sweep", "--n", "60,400", "--p", "1/2", "--k", "4", "--seeds", "2", "--out",
                      csv.string(), "--cell-dir", cells.string(), "--retries", "2"});
  REQUIRE(r.code == 0);
  std::ifstream in(csv);
  std::stringstream text;
  text << in.rdbuf();
  const auto rows = lines(text.str());
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == header);
  const auto columns = std::count(header.begin(), header.end(), ',');
  for (const auto& row : rows) CHECK(std::count(row.begin(), row.end(), ',') == columns);
  CHECK(rows[3].find(",ok,") != std::string::npos);
  CHECK(fs::exists(cells / "n400_seed2.json"));
  CHECK_FALSE(fs::exists(csv.string() + ".tmp"));
}
