#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <unistd.h>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "support.hpp"

#ifndef METALLIC_CLI_BIN
#error "METALLIC_CLI_BIN must point at the metallic-verify binary"
#endif

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

std::string temp_path(const std::string& name) {
  return std::string("/tmp/metallic_cli_test_") + std::to_string(::getpid()) + "_" + name;
}

CommandResult run_cli(const std::string& args) {
  const std::string out_file = temp_path("out.txt");
  const std::string cmd =
      std::string(METALLIC_CLI_BIN) + " " + args + " > " + out_file + " 2>&1";
  const int rc = std::system(cmd.c_str());
  CommandResult result;
  result.exit_code = WEXITSTATUS(rc);
  std::ifstream in(out_file);
  std::ostringstream buf;
  buf << in.rdbuf();
  result.output = buf.str();
  std::remove(out_file.c_str());
  return result;
}

const char* kAsymmetricManifest = R"json({
  "name": "broken", "dim": 2, "coords": ["x", "y"], "p": 0, "q": 0,
  "domain": [[-1, 1], [-1, 1]],
  "g": [["1", "0"], ["0", "1"]],
  "J": [["0", "1"], ["0", "0"]]
})json";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("run on a built-in example passes every check") {
  const CommandResult r = run_cli("run --example E1 --suite core --suite connections");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("[FAIL]") == std::string::npos);
  CHECK(r.output.find("CHECK core.j_polynomial E1") != std::string::npos);
}

TEST_CASE("a manifest with an asymmetric structure fails the symmetry check") {
  const std::string path = temp_path("asym.json");
  {
    std::ofstream out(path);
    out << kAsymmetricManifest;
  }
  const CommandResult r = run_cli("run --input " + path + " --suite core");
  std::remove(path.c_str());
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("CHECK core.j_symmetric broken") != std::string::npos);
  // the failing check is named on its own line
  std::istringstream lines(r.output);
  std::string line;
  bool found = false;
  while (std::getline(lines, line))
    if (line.find("core.j_symmetric") != std::string::npos &&
        line.find("[FAIL]") != std::string::npos)
      found = true;
  CHECK(found);
}

TEST_CASE("missing input file exits 2") {
  const CommandResult r = run_cli("run --input /nonexistent/manifest.json");
  CHECK(r.exit_code == 2);
}

TEST_CASE("bad flags exit 2") {
  CHECK(run_cli("run --example E1 --suite nonsense").exit_code == 2);
  CHECK(run_cli("run").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
}

TEST_CASE("json report round-trips and is deterministic modulo wall time") {
  const CommandResult a = run_cli("run --example E2 --suite core --format json --seed 7");
  const CommandResult b = run_cli("run --example E2 --suite core --format json --seed 7");
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  const nlohmann::json ja = nlohmann::json::parse(a.output);
  const nlohmann::json jb = nlohmann::json::parse(b.output);
  REQUIRE(ja.is_array());
  REQUIRE(ja.size() == jb.size());
  REQUIRE(ja.size() > 0);
  for (std::size_t i = 0; i < ja.size(); ++i) {
    for (const char* key :
         {"check_id", "manifold_id", "sample_count", "max_abs_err", "tolerance", "pass"}) {
      REQUIRE(ja[i].contains(key));
      CHECK(ja[i][key] == jb[i][key]);
    }
    CHECK(ja[i].contains("wall_ms"));
  }
  // sorted by check id
  for (std::size_t i = 1; i < ja.size(); ++i)
    CHECK(ja[i - 1]["check_id"].get<std::string>() <= ja[i]["check_id"].get<std::string>());
  // a different seed still passes but may change the errors
  const CommandResult c = run_cli("run --example E2 --suite core --format json --seed 8");
  CHECK(c.exit_code == 0);
}

TEST_CASE("report can be written to a file") {
  const std::string path = temp_path("report.json");
  const CommandResult r =
      run_cli("run --example E3 --suite core --format json --out " + path);
  CHECK(r.exit_code == 0);
  std::ifstream in(path);
  REQUIRE(in.good());
  const nlohmann::json doc = nlohmann::json::parse(in);
  CHECK(doc.is_array());
  std::remove(path.c_str());
}

TEST_CASE("list shows the built-in examples with flags") {
  const CommandResult a = run_cli("list");
  CHECK(a.exit_code == 0);
  for (const char* id : {"E1", "E2", "E3", "E4"}) CHECK(a.output.find(id) != std::string::npos);
  CHECK(a.output.find("integrable=true") != std::string::npos);
  CHECK(a.output.find("flat=false") != std::string::npos);  // E4
  // deterministic across runs
  const CommandResult b = run_cli("list");
  CHECK(a.output == b.output);
}

}  // TEST_SUITE
