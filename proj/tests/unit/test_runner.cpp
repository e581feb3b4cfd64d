#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dioph/engine.hpp"
#include "dioph/runner.hpp"

using namespace dioph;
using nlohmann::json;

namespace {

std::string scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("dioph_runner_" + name);
  std::filesystem::remove_all(dir);
  return dir.string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

ErrorKind error_of(const json& j) {
  try {
    run(Manifest::from_json(j));
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::DomainError;
}

}  // namespace

TEST_CASE("constants command matches build_constants") {
  json j = {{"command", "constants"}, {"out_dir", scratch_dir("constants")}, {"params", {{"t", 2}, {"N", 1}}}};
  Manifest m = Manifest::from_json(j);
  RunOutcome r = run(m);
  CHECK(r.exit_code == 0);
  REQUIRE(r.files.size() == 1);
  std::istringstream body(strip_provenance(slurp(r.files[0])));
  std::string line;
  std::getline(body, line);
  CHECK(line == "name,value");
  ConstantTable T = build_constants(2, 1, default_a(2, {}));
  for (const auto& [k, v] : T.rows()) {
    REQUIRE(std::getline(body, line));
    CHECK(line == k + "," + v);
  }
  CHECK(slurp(r.files[0]).find("# manifest_hash: " + m.hash()) != std::string::npos);
}

TEST_CASE("liouville command on the powers of ten") {
  json betas = json::array();
  for (int k = 1; k <= 6; ++k) betas.push_back("(1" + std::string(k, '0') + ":1)");
  json j = {{"command", "liouville"},
            {"out_dir", scratch_dir("liouville")},
            {"params", {{"alpha", "(1:0)"}, {"betas", betas}}}};
  RunOutcome r = run(Manifest::from_json(j));
  CHECK(r.holds == 6);
  CHECK(r.violated == 0);
  CHECK(r.exit_code == 0);
  std::string csv = strip_provenance(slurp(r.files[0]));
  size_t rows = 0, pos = 0;
  while ((pos = csv.find(",HOLDS\n", pos)) != std::string::npos) ++rows, ++pos;
  CHECK(rows == 6);
}

TEST_CASE("manifest schema") {
  CHECK(error_of({{"command", "approx"}, {"params", {{"D", {2, 3}}}}}) == ErrorKind::SchemaError);
  CHECK(error_of({{"command", "nope"}}) == ErrorKind::SchemaError);
  CHECK(error_of({{"command", "constants"}, {"params", {{"t", 1}, {"typo", 1}}}}) == ErrorKind::SchemaError);
  CHECK(error_of({{"command", "constants"}, {"params", {{"t", "one"}}}}) == ErrorKind::SchemaError);
  CHECK(error_of({{"command", "constants"}, {"precision", 8}, {"params", {{"t", 1}}}}) == ErrorKind::SchemaError);
  CHECK(error_of({{"command", "constants"}, {"extra", 1}, {"params", {{"t", 1}}}}) == ErrorKind::SchemaError);
  CHECK(error_of({{"command", "liouville"}, {"params", {{"alpha", "(1:0)"}, {"betas", {"(2:1)"}},
                                                         {"convention", "weil"}}}}) == ErrorKind::SchemaError);
  CHECK(error_of({{"command", "constants"},
                  {"out_dir", scratch_dir("bad_cal")},
                  {"params", {{"t", 1}, {"calibration", {{"m", 1}}}}}}) == ErrorKind::InvalidCalibration);
}

TEST_CASE("manifests round-trip") {
  json j = {{"command", "approx"},
            {"seed", 7},
            {"precision", 256},
            {"params", {{"theta", "(1:e)"}, {"D", {{"from", 2}, {"to", 4}}}, {"a", "21/2"}}}};
  Manifest m = Manifest::from_json(j);
  Manifest back = Manifest::from_json(m.to_json());
  CHECK(back.to_json().dump() == m.to_json().dump());
  CHECK(back.hash() == m.hash());
  CHECK(m.params["D"] == json({2, 3, 4}));
  CHECK(m.params["N"] == 1);
}

TEST_CASE("identical manifests give identical bodies") {
  json j = {{"command", "approx"}, {"params", {{"theta", "(1:e)"}, {"D", {2, 3}}}}};
  j["out_dir"] = scratch_dir("det_a");
  RunOutcome a = run(Manifest::from_json(j));
  j["out_dir"] = scratch_dir("det_b");
  RunOutcome b = run(Manifest::from_json(j));
  REQUIRE(a.files.size() == 3);
  REQUIRE(b.files.size() == 3);
  for (size_t i = 0; i < a.files.size(); ++i) {
    std::string x = strip_provenance(slurp(a.files[i])), y = strip_provenance(slurp(b.files[i]));
    CHECK(!x.empty());
    CHECK(x == y);
  }
  // t = 1 end terms miss the weighted-distance bound, which is reported.
  CHECK(a.exit_code == 2);
  CHECK(a.violated == 2);
}

TEST_CASE("bezout-check and hilbert commands") {
  json j = {{"command", "bezout-check"},
            {"seed", 3},
            {"out_dir", scratch_dir("bezout")},
            {"params", {{"check", "bezout1"}, {"instances", {{{"theta", "(1:e)"}, {"cycle", "points[(1:2), (1:3)*2]"}}}}}}};
  RunOutcome r = run(Manifest::from_json(j));
  CHECK(r.holds == 1);
  CHECK(r.exit_code == 0);

  json h = {{"command", "hilbert"},
            {"out_dir", scratch_dir("hilbert")},
            {"params", {{"cycle", "curve(x0*x1 - x2^2)"}, {"t", 2}, {"D", {{"from", 0}, {"to", 6}}}}}};
  RunOutcome rh = run(Manifest::from_json(h));
  CHECK(rh.holds == 7);
  std::string csv = strip_provenance(slurp(rh.files[0]));
  CHECK(csv.find("\n6,13,") != std::string::npos);
}

TEST_CASE("default precision from the environment") {
  setenv(kPrecisionEnv, "1024", 1);
  CHECK(default_precision() == 1024);
  CHECK(Manifest::from_json({{"command", "constants"}, {"params", {{"t", 1}}}}).precision == 1024);
  setenv(kPrecisionEnv, "lots", 1);
  CHECK_THROWS_AS(default_precision(), Error);
  unsetenv(kPrecisionEnv);
  CHECK(default_precision() == 512);
}
