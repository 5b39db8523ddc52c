#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "grw/report.hpp"
#include "grw/spacetime.hpp"

namespace grw {

struct SamplingSpec {
  enum class Strategy { Grid, UniformRandom };
  Strategy strategy = Strategy::UniformRandom;
  int count = 20;
  std::uint64_t seed = 0;
  std::vector<std::pair<double, double>> bounds;  // one [lo,hi] per coordinate
};

// One requested check with its parameter block. Unknown ids are rejected at
// validation time. `report_only` demotes the verdict to "info" so exploratory
// checks do not fail a scenario.
struct CheckSpec {
  std::string id;
  std::map<std::string, double> numbers;  // lambda1, tau, m, k, tolerance, planes
  std::string potential;                  // gradient soliton modes / df_collinear
  std::vector<std::string> w;             // rs_lie vector field components
  bool report_only = false;
};

struct Scenario {
  std::string name;
  int n = 4;
  std::string warp;
  FiberKind fiber_kind = FiberKind::Flat;
  double k_star = 0.0;
  std::vector<std::string> fiber_entries;
  std::map<std::string, double> constants;
  SamplingSpec sampling;
  std::vector<CheckSpec> checks;
  std::string output_format = "json";  // "json" | "text"
  std::string output_path = "-";
  double tolerance = 1e-7;
};

// Parse and structurally validate a scenario document (JSON). Throws
// ConfigError with a diagnostic; never evaluates anything beyond expression
// parsing.
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);
void validate_scenario(const Scenario& sc);

struct SampledPoints {
  std::vector<Vec> points;
  int requested = 0;
  int rejected = 0;
  std::vector<Vec> rejected_points;  // first few rejected draws, for the report
};

// Deterministic for a fixed seed. Random sampling redraws inadmissible points
// up to 100 * count attempts; grid sampling keeps the admissible sublattice.
SampledPoints sample_points(const SpacetimeSpec& spec, const SamplingSpec& sampling);

struct CheckResult {
  std::string id;
  int points_evaluated = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::string verdict;  // "pass" | "fail" | "error" | "info"
  std::string error;
  ReportValue::Object aux;

  bool counts_against_overall() const { return verdict == "fail" || verdict == "error"; }
};

struct CheckReport {
  std::string scenario_name;
  std::string version;
  ReportValue::Object conventions;
  std::uint64_t seed = 0;
  int points_requested = 0;
  int points_admissible = 0;
  int points_rejected = 0;
  std::vector<Vec> rejected_points;
  std::vector<CheckResult> checks;
  bool overall_pass = false;
};

CheckReport run_scenario(const Scenario& sc);

std::string render_json(const CheckReport& rep);
std::string render_text(const CheckReport& rep);

// Known check ids with one-line descriptions, in canonical order.
std::vector<std::pair<std::string, std::string>> list_checks();

}  // namespace grw
