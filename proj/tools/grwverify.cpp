// Command-line front end: scenario-driven verification runs over warped
// product spacetimes. Exit codes: 0 all checks pass, 1 at least one check
// fails or errors, 2 configuration problem.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "grw/errors.hpp"
#include "grw/scenario.hpp"
#include "grw/version.hpp"

namespace {

int write_output(const std::string& body, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << body;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write to '" << path << "'\n";
    return 1;
  }
  out << body;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(grw::kToolName) + " " + grw::kToolVersion +
               " - pointwise verification of warped-product spacetime identities"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string format_override;
  std::string out_override;
  std::optional<std::uint64_t> seed_override;
  std::optional<double> tol_override;
  std::optional<int> points_override;

  CLI::App* run = app.add_subcommand("run", "run a scenario and emit a report");
  run->add_option("--scenario", scenario_path, "scenario file (JSON)")->required();
  run->add_option("--format", format_override, "report format: json or text");
  run->add_option("--out", out_override, "output path ('-' for stdout)");
  run->add_option("--seed", seed_override, "override the sampling seed");
  run->add_option("--tol", tol_override, "override the scenario tolerance");
  run->add_option("--points", points_override, "override the sampling count");

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "schema-check a scenario file");
  validate->add_option("--scenario", validate_path, "scenario file (JSON)")->required();

  CLI::App* list = app.add_subcommand("list-checks", "list available check ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (list->parsed()) {
      for (const auto& [id, desc] : grw::list_checks())
        std::cout << id << "\n    " << desc << "\n";
      return 0;
    }

    if (validate->parsed()) {
      grw::load_scenario(validate_path);
      std::cout << "ok\n";
      return 0;
    }

    grw::Scenario sc = grw::load_scenario(scenario_path);
    if (seed_override) sc.sampling.seed = *seed_override;
    if (tol_override) sc.tolerance = *tol_override;
    if (points_override) sc.sampling.count = *points_override;
    if (!format_override.empty()) {
      if (format_override != "json" && format_override != "text")
        throw grw::ConfigError("format must be 'json' or 'text'");
      sc.output_format = format_override;
    }
    if (!out_override.empty()) sc.output_path = out_override;

    grw::CheckReport rep = grw::run_scenario(sc);
    std::string body =
        sc.output_format == "text" ? grw::render_text(rep) : grw::render_json(rep);
    if (write_output(body, sc.output_path) != 0) return 1;
    return rep.overall_pass ? 0 : 1;
  } catch (const grw::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const grw::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
