#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "steer/cli.hpp"
#include "steer/state_io.hpp"

using namespace steer;
using namespace steer::cli;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> fields(const std::string& row) {
  std::vector<std::string> out;
  std::istringstream in(row);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  if (!row.empty() && row.back() == ',') out.emplace_back();
  return out;
}

RunConfig radii_config(radii::FamilyKind kind, int lo, int hi) {
  RunConfig c;
  c.command = Command::Radii;
  c.families = {kind};
  c.d_min = lo;
  c.d_max = hi;
  return c;
}

}  // namespace

TEST_CASE("radii CSV has a fixed header and the expected rows") {
  std::ostringstream out;
  radii_table(radii_config(radii::FamilyKind::Werner, 2, 4), out);
  const auto l = lines(out.str());
  REQUIRE(l.size() == 5);
  CHECK(l[0] == "# schema: steer-radii/1 family=werner");
  CHECK(l[1] == "d,R2_closed_form,R2_solver,R_PVM,POVM_lower_bound,S");
  const auto row = fields(l[3]);
  REQUIRE(row.size() == 6);
  CHECK(row[0] == "3");
  CHECK(std::stod(row[1]) == doctest::Approx(0.734013676).epsilon(1e-9));
  CHECK(std::stod(row[2]) == doctest::Approx(0.734013676).epsilon(1e-9));
  CHECK(std::stod(row[3]) == doctest::Approx(2.0 / 3.0));
  CHECK(std::stod(row[4]) == doctest::Approx(0.398148148).epsilon(1e-9));
  CHECK(std::stod(row[5]) == doctest::Approx(0.25));

  std::ostringstream iso;
  radii_table(radii_config(radii::FamilyKind::Isotropic, 2, 3), iso);
  const auto r2 = fields(lines(iso.str())[2]);
  CHECK(r2[4].empty());
  CHECK(std::stod(r2[1]) == doctest::Approx(0.5));
  CHECK(std::stod(r2[3]) == doctest::Approx(0.5));
}

TEST_CASE("radii JSON uses null for the missing POVM bound") {
  RunConfig c = radii_config(radii::FamilyKind::Isotropic, 3, 3);
  c.format = OutputFormat::Json;
  std::ostringstream out;
  radii_table(c, out);
  const auto doc = nlohmann::json::parse(out.str());
  CHECK(doc["schema"] == kRadiiSchema);
  CHECK(doc["rows"][0]["POVM_lower_bound"].is_null());
  CHECK(doc["rows"][0]["R2_closed_form"].get<double>() == doctest::Approx(1.0 - 1.0 / std::sqrt(3.0)));
  CHECK(doc["rows"][0]["R_PVM"].get<double>() == doctest::Approx(5.0 / 12.0));
}

TEST_CASE("output is byte-identical across runs") {
  RunConfig c;
  c.command = Command::ConjectureScan;
  c.families = {radii::FamilyKind::Werner, radii::FamilyKind::Isotropic};
  c.d_min = 2;
  c.d_max = 30;
  std::ostringstream a, b;
  conjecture_scan(c, a);
  conjecture_scan(c, b);
  CHECK(a.str() == b.str());
}

TEST_CASE("conjecture scan reports per-rank values and argmin") {
  RunConfig c;
  c.command = Command::ConjectureScan;
  c.format = OutputFormat::Json;
  c.families = {radii::FamilyKind::Werner};
  c.d_min = 2;
  c.d_max = 4;
  std::ostringstream out;
  conjecture_scan(c, out);
  const auto doc = nlohmann::json::parse(out.str());
  CHECK(doc["flagged"] == 0);
  CHECK(doc["rows"][0]["per_rank"].size() == 1);
  CHECK(doc["rows"][2]["d"] == 4);
  CHECK(doc["rows"][2]["per_rank"].size() == 2);
  CHECK(doc["rows"][2]["argmin_rank"] == 1);
}

TEST_CASE("configuration validation") {
  CHECK_THROWS_AS(validate(radii_config(radii::FamilyKind::Werner, 1, 3)), std::invalid_argument);
  CHECK_THROWS_AS(validate(radii_config(radii::FamilyKind::Werner, 5, 3)), std::invalid_argument);
  CHECK_THROWS_AS(validate(radii_config(radii::FamilyKind::Werner, 2, 100001)), std::invalid_argument);
  CHECK_NOTHROW(validate(radii_config(radii::FamilyKind::Werner, 2, 100000)));
  RunConfig b;
  b.command = Command::Bound;
  CHECK_THROWS_AS(validate(b), std::invalid_argument);
  CHECK(parse_level("pvm") == Level::Projective);
  CHECK_THROWS_AS(parse_level("3"), std::invalid_argument);
}

TEST_CASE("run maps failures to exit codes") {
  std::ostringstream out, err;
  CHECK(run(radii_config(radii::FamilyKind::Werner, 2, 3), out, err) == kSuccess);
  CHECK(run(radii_config(radii::FamilyKind::Werner, 0, 3), out, err) == kInputError);

  RunConfig b;
  b.command = Command::Bound;
  b.state_file = "/nonexistent/state.json";
  CHECK(run(b, out, err) == kInputError);

  RunConfig v;
  v.command = Command::Verify;
  v.samples = 20000;
  std::ostringstream report;
  CHECK(run(v, report, err) == kSuccess);
  const auto doc = nlohmann::json::parse(report.str());
  CHECK(doc["passed"] == true);
  CHECK(doc["checks"].size() > 10);
}

TEST_CASE("state files round-trip and are validated") {
  const BipartiteState s = isotropic_state(2, 0.7);
  std::stringstream io;
  write_state(s, io);
  const BipartiteState back = read_state(io);
  CHECK(back.dim_a() == 2);
  CHECK((back.matrix() - s.matrix()).cwiseAbs().maxCoeff() < 1e-15);

  std::istringstream missing(R"({"dimA": 2, "rho": []})");
  CHECK_THROWS_AS(read_state(missing), std::invalid_argument);
  std::istringstream wrong_size(R"({"dimA": 2, "dimB": 2, "rho": [[1, 0]]})");
  CHECK_THROWS_AS(read_state(wrong_size), std::invalid_argument);
  std::istringstream not_json("not json");
  CHECK_THROWS_AS(read_state(not_json), std::invalid_argument);
  std::istringstream not_state(R"({"dimA": 1, "dimB": 2, "rho": [[0.5, 0], [0, 0], [0, 0], [0.6, 0]]})");
  CHECK_THROWS_AS(read_state(not_state), std::invalid_argument);
}

TEST_CASE("bound report on a filtered entangled state") {
  Matrix psi = Matrix::Zero(4, 1);
  psi(0, 0) = std::sqrt(0.8);
  psi(3, 0) = std::sqrt(0.2);
  const std::string path = "bound_test_state.json";
  {
    std::ofstream f(path);
    write_state(BipartiteState(2, 2, psi * psi.adjoint()), f);
  }
  RunConfig c;
  c.command = Command::Bound;
  c.state_file = path;
  c.format = OutputFormat::Json;
  std::ostringstream out, err;
  REQUIRE(run(c, out, err) == kSuccess);
  const auto doc = nlohmann::json::parse(out.str());
  // Filtering gives the maximally entangled state; R_2 = 1/2 for two qubits.
  CHECK(doc["lower_bound"].get<double>() == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(doc["upper_bound"].get<double>() == doctest::Approx(0.75));
  CHECK(doc["verdict"] == "certified-steerable at level 2");
  std::remove(path.c_str());
}
