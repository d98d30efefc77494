// Batch verification runner for chart manifolds with metallic structures.
//
//   metallic-verify run --example E2 --suite connections --format json
//   metallic-verify run --input manifold.json --samples 500 --seed 7
//   metallic-verify list
//
// Exit status: 0 when every check passes, 1 when any check fails, 2 on
// load/config errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "metallic/connections.hpp"
#include "metallic/examples.hpp"
#include "metallic/suites.hpp"

namespace {

using metallic::ChartManifold;
using metallic::RunConfig;
using metallic::TimedReport;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

int run_command(const std::string& input, const std::string& example, const RunConfig& config,
                const std::string& format, const std::string& out_path) {
  ChartManifold m;
  try {
    if (!example.empty())
      m = metallic::load_example(example);
    else
      m = metallic::load_manifest_file(input);
  } catch (const metallic::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  std::vector<TimedReport> reports;
  try {
    reports = metallic::run_suites(m, config);
  } catch (const metallic::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  std::ostringstream body;
  bool all_pass = true;
  if (format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& tr : reports) {
      nlohmann::json j;
      j["check_id"] = tr.report.check_id;
      j["manifold_id"] = tr.report.manifold_id;
      j["sample_count"] = tr.report.sample_count;
      j["max_abs_err"] = tr.report.max_abs_err;
      j["tolerance"] = tr.report.tolerance;
      j["pass"] = tr.report.pass;
      j["wall_ms"] = tr.wall_ms;
      if (!tr.error.empty()) j["error"] = tr.error;
      arr.push_back(j);
      all_pass = all_pass && tr.report.pass;
    }
    body << arr.dump(2) << "\n";
  } else {
    for (const auto& tr : reports) {
      body << "CHECK " << tr.report.check_id << " " << tr.report.manifold_id
           << " max_err=" << format_double(tr.report.max_abs_err)
           << " tol=" << format_double(tr.report.tolerance)
           << (tr.report.pass ? " [PASS]" : " [FAIL]");
      if (!tr.error.empty()) body << " error: " << tr.error;
      body << "\n";
      all_pass = all_pass && tr.report.pass;
    }
  }

  if (out_path.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "error: cannot write to '" << out_path << "'\n";
      return 2;
    }
    out << body.str();
  }
  return all_pass ? 0 : 1;
}

int list_command() {
  for (const auto& e : metallic::builtin_examples()) {
    const ChartManifold m = metallic::load_example(e.id);
    const metallic::PointSample s = metallic::sample_points(m, 42, 200);
    const metallic::StructureFlags f = metallic::classify(m, s, 1e-9);
    std::cout << e.id << "  " << e.description << "\n"
              << "    flags: integrable=" << (f.integrable ? "true" : "false")
              << " locally_metallic=" << (f.locally_metallic ? "true" : "false")
              << " nearly_locally_metallic=" << (f.nearly_locally_metallic ? "true" : "false")
              << " flat=" << (f.flat ? "true" : "false") << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification runner for metallic pseudo-Riemannian chart manifolds"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "load a manifold and run check suites");
  std::string input, example, format = "text", out_path;
  RunConfig config;
  config.suites.clear();
  auto* input_opt = run->add_option("--input", input, "path to a JSON manifest");
  auto* example_opt =
      run->add_option("--example", example, "built-in example id (see 'list')");
  input_opt->excludes(example_opt);
  run->add_option("--suite", config.suites,
                  "suite to run: core, connections, generalized, lifts, all (repeatable)")
      ->check(CLI::IsMember({"core", "connections", "generalized", "lifts", "all"}));
  run->add_option("--samples", config.samples, "number of sample points (default 200)")
      ->check(CLI::PositiveNumber);
  run->add_option("--seed", config.seed, "sampling seed (default 42)");
  run->add_option("--tol", config.tolerance, "base tolerance (default 1e-9)")
      ->check(CLI::PositiveNumber);
  run->add_option("--format", format, "output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  run->add_option("--out", out_path, "write the report to a file instead of stdout");

  auto* list = app.add_subcommand("list", "list built-in examples with classification flags");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // config errors exit 2; --help exits 0
  }

  if (list->parsed()) return list_command();

  if (input.empty() && example.empty()) {
    std::cerr << "error: one of --input or --example is required\n";
    return 2;
  }
  if (config.suites.empty()) config.suites.push_back("all");
  return run_command(input, example, config, format, out_path);
}
