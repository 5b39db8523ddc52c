#include "grw/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include <json.hpp>

#include "grw/curvature.hpp"
#include "grw/errors.hpp"
#include "grw/fluid.hpp"
#include "grw/observer.hpp"
#include "grw/soliton.hpp"
#include "grw/version.hpp"

namespace grw {

namespace {

using nlohmann::json;

const std::vector<std::pair<std::string, std::string>> kChecks = {
    {"torse_forming", "unit timelike field satisfies nabla rho = psi (id + eta x rho)"},
    {"ricci_eigenvector", "rho is a Ricci eigenvector; xi compared with (n-1) mu"},
    {"lemma1", "R(U,V)rho and S(U,rho) take the warped-product form in mu"},
    {"lemma2", "spatial constancy of mu (contracted identity); literal form reported"},
    {"lemma3", "third-order Ricci derivative identity g((nabla_rho Q)U - (nabla_U Q)rho, rho) = 0"},
    {"aux_identities", "psi gradient identity, curvature form of nabla rho, second Bianchi sum"},
    {"gradient_rs", "residual of Hess f + S + lambda1 g"},
    {"rs_lie", "residual of (L_W g)/2 + S + lambda1 g"},
    {"qes", "residual of Hess f + S - (1/m) df x df - (lambda1 + tau r) g"},
    {"df_collinear", "gradient of the potential is collinear with rho"},
    {"theorem1", "gradient Ricci soliton pipeline: audit, branch, perfect-fluid conclusion"},
    {"theorem2", "quasi-Einstein pipeline: audit incl. beta1 = (n-1) mu, perfect-fluid conclusion"},
    {"pf_decompose", "fit S = a1 g + b1 eta x eta at every point"},
    {"stress_energy", "T from the field equations; fluid fit consistent with the Ricci fit"},
    {"eos", "pressure/density inversion and era classification"},
    {"remark_eos", "equation-of-state constant of the concluded Ricci form (n = 4)"},
    {"div_weyl", "max |div C| from exact Ricci derivatives"},
    {"fiber_constant_curvature", "sectional curvature constancy of the fiber (RW recognition)"},
};

bool known_check(const std::string& id) {
  for (const auto& [k, d] : kChecks)
    if (k == id) return true;
  return false;
}

[[noreturn]] void config_fail(const std::string& msg) { throw ConfigError("scenario: " + msg); }

double require_number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_number())
    config_fail(where + " needs numeric field '" + key + "'");
  return j[key].get<double>();
}

std::string require_string(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_string())
    config_fail(where + " needs string field '" + key + "'");
  return j[key].get<std::string>();
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    config_fail(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) config_fail("top level must be an object");

  Scenario sc;
  sc.name = require_string(j, "name", "scenario");

  if (!j.contains("spacetime") || !j["spacetime"].is_object())
    config_fail("missing 'spacetime' object");
  const json& st = j["spacetime"];
  sc.n = static_cast<int>(require_number(st, "n", "spacetime"));
  sc.warp = require_string(st, "warp", "spacetime");
  if (st.contains("constants")) {
    if (!st["constants"].is_object()) config_fail("spacetime.constants must be an object");
    for (auto it = st["constants"].begin(); it != st["constants"].end(); ++it) {
      if (!it.value().is_number()) config_fail("constant '" + it.key() + "' must be numeric");
      sc.constants[it.key()] = it.value().get<double>();
    }
  }
  if (!st.contains("fiber") || !st["fiber"].is_object())
    config_fail("missing 'spacetime.fiber' object");
  const json& fb = st["fiber"];
  std::string kind = require_string(fb, "kind", "fiber");
  if (kind == "flat") {
    sc.fiber_kind = FiberKind::Flat;
  } else if (kind == "constant_curvature") {
    sc.fiber_kind = FiberKind::ConstantCurvature;
    sc.k_star = require_number(fb, "k_star", "fiber");
  } else if (kind == "custom_diagonal") {
    sc.fiber_kind = FiberKind::CustomDiagonal;
    if (!fb.contains("entries") || !fb["entries"].is_array())
      config_fail("custom_diagonal fiber needs 'entries' array");
    for (const auto& e : fb["entries"]) {
      if (!e.is_string()) config_fail("fiber entries must be expression strings");
      sc.fiber_entries.push_back(e.get<std::string>());
    }
  } else {
    config_fail("unknown fiber kind '" + kind + "'");
  }

  if (!j.contains("sampling") || !j["sampling"].is_object())
    config_fail("missing 'sampling' object");
  const json& sp = j["sampling"];
  std::string strategy = require_string(sp, "strategy", "sampling");
  if (strategy == "grid")
    sc.sampling.strategy = SamplingSpec::Strategy::Grid;
  else if (strategy == "uniform_random")
    sc.sampling.strategy = SamplingSpec::Strategy::UniformRandom;
  else
    config_fail("unknown sampling strategy '" + strategy + "'");
  sc.sampling.count = static_cast<int>(require_number(sp, "count", "sampling"));
  if (sp.contains("seed")) sc.sampling.seed = sp["seed"].get<std::uint64_t>();
  if (!sp.contains("bounds") || !sp["bounds"].is_array())
    config_fail("sampling needs 'bounds' array of [lo, hi] pairs");
  for (const auto& b : sp["bounds"]) {
    if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number())
      config_fail("each bound must be a [lo, hi] pair");
    sc.sampling.bounds.emplace_back(b[0].get<double>(), b[1].get<double>());
  }

  if (j.contains("tolerance")) {
    if (!j["tolerance"].is_number()) config_fail("tolerance must be numeric");
    sc.tolerance = j["tolerance"].get<double>();
  }

  if (!j.contains("checks") || !j["checks"].is_array() || j["checks"].empty())
    config_fail("missing non-empty 'checks' array");
  for (const auto& c : j["checks"]) {
    if (!c.is_object()) config_fail("each check must be an object");
    CheckSpec cs;
    cs.id = require_string(c, "id", "check");
    for (auto it = c.begin(); it != c.end(); ++it) {
      if (it.key() == "id") continue;
      if (it.key() == "potential") {
        if (!it.value().is_string()) config_fail("check 'potential' must be a string");
        cs.potential = it.value().get<std::string>();
      } else if (it.key() == "w") {
        if (!it.value().is_array()) config_fail("check 'w' must be an array of strings");
        for (const auto& comp : it.value()) {
          if (!comp.is_string()) config_fail("check 'w' entries must be strings");
          cs.w.push_back(comp.get<std::string>());
        }
      } else if (it.key() == "report_only") {
        if (!it.value().is_boolean()) config_fail("check 'report_only' must be boolean");
        cs.report_only = it.value().get<bool>();
      } else if (it.value().is_number()) {
        cs.numbers[it.key()] = it.value().get<double>();
      } else {
        config_fail("check '" + cs.id + "': unknown field '" + it.key() + "'");
      }
    }
    sc.checks.push_back(std::move(cs));
  }

  if (j.contains("output")) {
    const json& out = j["output"];
    if (!out.is_object()) config_fail("'output' must be an object");
    if (out.contains("format")) sc.output_format = out["format"].get<std::string>();
    if (out.contains("path")) sc.output_path = out["path"].get<std::string>();
  }

  validate_scenario(sc);
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

void validate_scenario(const Scenario& sc) {
  if (sc.name.empty()) config_fail("name must be non-empty");
  if (sc.n < 4) config_fail("spacetime dimension must be at least 4");
  if (sc.output_format != "json" && sc.output_format != "text")
    config_fail("output format must be 'json' or 'text'");
  if (sc.fiber_kind == FiberKind::CustomDiagonal &&
      static_cast<int>(sc.fiber_entries.size()) != sc.n - 1)
    config_fail("custom fiber needs n-1 entries");
  if (sc.sampling.count < 1) config_fail("sampling count must be >= 1");
  if (static_cast<int>(sc.sampling.bounds.size()) != sc.n)
    config_fail("bounds must list one [lo, hi] pair per coordinate");
  for (const auto& [lo, hi] : sc.sampling.bounds)
    if (!(lo <= hi)) config_fail("bounds must satisfy lo <= hi");
  if (!(sc.tolerance > 0.0)) config_fail("tolerance must be positive");

  // Expressions must parse; this is still configuration, not evaluation.
  VarTable warp_vt;
  warp_vt.names = {"t"};
  warp_vt.constants = sc.constants;
  try {
    parse_expr(sc.warp, warp_vt);
  } catch (const ParseError& e) {
    config_fail(std::string("warp does not parse: ") + e.what());
  }
  if (sc.fiber_kind == FiberKind::CustomDiagonal) {
    VarTable fiber_vt = full_var_table(sc.n, sc.constants);
    fiber_vt.names.pop_back();
    for (const auto& entry : sc.fiber_entries) {
      try {
        parse_expr(entry, fiber_vt);
      } catch (const ParseError& e) {
        config_fail(std::string("fiber entry does not parse: ") + e.what());
      }
    }
  }

  VarTable full_vt = full_var_table(sc.n, sc.constants);
  for (const auto& c : sc.checks) {
    if (!known_check(c.id)) config_fail("unknown check id '" + c.id + "'");
    const bool needs_potential = c.id == "gradient_rs" || c.id == "qes" ||
                                 c.id == "df_collinear" || c.id == "theorem1" ||
                                 c.id == "theorem2" || c.id == "remark_eos";
    if (needs_potential && c.potential.empty())
      config_fail("check '" + c.id + "' needs a 'potential' expression");
    if (c.id == "rs_lie" && static_cast<int>(c.w.size()) != sc.n)
      config_fail("check 'rs_lie' needs 'w' with one component per coordinate");
    if ((c.id == "gradient_rs" || c.id == "rs_lie" || c.id == "theorem1") &&
        !c.numbers.count("lambda1"))
      config_fail("check '" + c.id + "' needs 'lambda1'");
    if ((c.id == "qes" || c.id == "theorem2") &&
        (!c.numbers.count("lambda1") || !c.numbers.count("tau")))
      config_fail("check '" + c.id + "' needs 'lambda1' and 'tau'");
    if (c.id == "remark_eos" && !c.numbers.count("coefficient"))
      config_fail("check 'remark_eos' needs 'coefficient' (-lambda1 or +beta1)");
    if (!c.potential.empty()) {
      try {
        parse_expr(c.potential, full_vt);
      } catch (const ParseError& e) {
        config_fail("potential in check '" + c.id + "' does not parse: " + e.what());
      }
    }
    for (const auto& comp : c.w) {
      try {
        parse_expr(comp, full_vt);
      } catch (const ParseError& e) {
        config_fail("vector component in check '" + c.id + "' does not parse: " + e.what());
      }
    }
    auto m_it = c.numbers.find("m");
    if (c.id == "qes" && m_it != c.numbers.end() && !(m_it->second > 0.0))
      config_fail("check 'qes': m must be positive (omit m for the tau-Einstein mode)");
  }
}

namespace {

double uniform01(std::mt19937_64& rng) {
  // 53-bit mantissa draw; identical across platforms for a fixed seed.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

SampledPoints sample_points(const SpacetimeSpec& spec, const SamplingSpec& sampling) {
  const int n = spec.n;
  if (static_cast<int>(sampling.bounds.size()) != n)
    throw ValidationError("sampling bounds do not match spacetime dimension");

  SampledPoints out;
  out.requested = sampling.count;

  if (sampling.strategy == SamplingSpec::Strategy::UniformRandom) {
    std::mt19937_64 rng(sampling.seed);
    const long long cap = 100LL * sampling.count;
    long long attempts = 0;
    while (static_cast<int>(out.points.size()) < sampling.count && attempts < cap) {
      ++attempts;
      Vec p(n);
      for (int i = 0; i < n; ++i) {
        auto [lo, hi] = sampling.bounds[i];
        p(i) = lo + (hi - lo) * uniform01(rng);
      }
      if (point_admissible(spec, p.data())) {
        out.points.push_back(std::move(p));
      } else {
        ++out.rejected;
        if (out.rejected_points.size() < 50) out.rejected_points.push_back(std::move(p));
      }
    }
    if (static_cast<int>(out.points.size()) < sampling.count)
      throw EvalError("sampling: could not find enough admissible points within attempt cap");
    return out;
  }

  // Grid: the smallest per-axis resolution m with m^n >= count, first `count`
  // lattice points in row-major order, admissible sublattice kept.
  int m = 1;
  auto lattice_size = [&](int mm) {
    double total = 1.0;
    for (int i = 0; i < n; ++i) total *= mm;
    return total;
  };
  while (lattice_size(m) < sampling.count) ++m;

  std::vector<int> idx(n, 0);
  int produced = 0;
  while (produced < sampling.count) {
    Vec p(n);
    for (int i = 0; i < n; ++i) {
      auto [lo, hi] = sampling.bounds[i];
      p(i) = (m == 1) ? 0.5 * (lo + hi) : lo + (hi - lo) * idx[i] / (m - 1.0);
    }
    ++produced;
    if (point_admissible(spec, p.data())) {
      out.points.push_back(std::move(p));
    } else {
      ++out.rejected;
      if (out.rejected_points.size() < 50) out.rejected_points.push_back(std::move(p));
    }
    int axis = n - 1;
    while (axis >= 0) {
      if (++idx[axis] < m) break;
      idx[axis] = 0;
      --axis;
    }
    if (axis < 0) break;
  }
  if (out.points.empty()) throw EvalError("sampling: no admissible grid points");
  return out;
}

namespace {

struct CheckContext {
  const Scenario& sc;
  const SpacetimeSpec& spec;
  const std::vector<Vec>& points;
  std::uint64_t seed;
};

double check_tol(const CheckSpec& cs, double fallback) {
  auto it = cs.numbers.find("tolerance");
  if (it != cs.numbers.end()) return it->second;
  return fallback;
}

SolitonParams soliton_params_from(const CheckContext& ctx, const CheckSpec& cs,
                                  SolitonMode default_mode) {
  SolitonParams params;
  params.mode = default_mode;
  if (cs.numbers.count("lambda1")) params.lambda1 = cs.numbers.at("lambda1");
  if (cs.numbers.count("tau")) params.tau = cs.numbers.at("tau");
  auto m_it = cs.numbers.find("m");
  if (default_mode == SolitonMode::QuasiEinstein && m_it == cs.numbers.end())
    params.mode = SolitonMode::TauEinstein;
  if (m_it != cs.numbers.end()) params.m = m_it->second;
  if (!cs.potential.empty())
    params.potential = ScalarFieldSpec::from_text(ctx.spec, cs.potential);
  if (!cs.w.empty()) params.w = VectorFieldSpec::from_text(ctx.spec, cs.w);
  return params;
}

ReportValue::Object verdict_to_aux(const TheoremVerdict& v) {
  ReportValue::Object aux;
  aux["soliton_residual_max"] = v.soliton_residual_max;
  aux["is_soliton"] = v.is_soliton;
  aux["c1_mean"] = v.c1_mean;
  aux["c1_std"] = v.c1_std;
  aux["c1_constant"] = v.c1_constant;
  aux["collinearity_max"] = v.collinearity_max;
  aux["mu_degenerate"] = v.mu_degenerate;
  if (!v.beta1_values.empty()) {
    aux["beta1_mean"] = v.beta1_mean;
    aux["beta1_std"] = v.beta1_std;
    aux["beta1_constant"] = v.beta1_constant;
    aux["beta1_vs_mu_residual"] = v.beta1_vs_mu_residual;
  }
  aux["branch"] = v.branch;
  aux["conclusion_residual_max"] = v.conclusion_residual_max;
  if (v.branch == "c1_zero") aux["div_weyl_max"] = v.div_weyl_max;
  aux["pf_concluded"] = v.pf_concluded;
  aux["pf_a1_mean"] = v.pf_a1_mean;
  aux["pf_b1_mean"] = v.pf_b1_mean;
  aux["pf_residual_max"] = v.pf_residual_max;
  aux["b1_vs_c1psi_max"] = v.b1_vs_c1psi_max;
  aux["detail"] = v.verdict;
  return aux;
}

CheckResult run_check(const CheckContext& ctx, const CheckSpec& cs) {
  CheckResult res;
  res.id = cs.id;
  res.points_evaluated = static_cast<int>(ctx.points.size());
  res.tolerance = check_tol(cs, ctx.sc.tolerance);
  const auto& points = ctx.points;
  const SpacetimeSpec& spec = ctx.spec;
  bool pass = false;

  if (cs.id == "torse_forming") {
    double worst = 0.0;
    for (const Vec& p : points)
      worst = std::max(worst, check_torse_forming(spec, p.data()));
    res.max_residual = worst;
    pass = worst <= res.tolerance;
  } else if (cs.id == "ricci_eigenvector") {
    double worst = 0.0, xi_sum = 0.0, xi_mu_worst = 0.0;
    int degenerate = 0;
    for (const Vec& p : points) {
      RicciEigenResult r = check_ricci_eigenvector(spec, p.data());
      worst = std::max(worst, r.residual);
      xi_mu_worst = std::max(xi_mu_worst, r.xi_vs_mu_residual);
      xi_sum += r.xi;
      if (r.degenerate) ++degenerate;
    }
    res.max_residual = worst;
    res.aux["xi_mean"] = xi_sum / static_cast<double>(points.size());
    res.aux["xi_vs_mu_residual_max"] = xi_mu_worst;
    res.aux["degenerate_points"] = degenerate;
    pass = worst <= res.tolerance && xi_mu_worst <= res.tolerance;
  } else if (cs.id == "lemma1" || cs.id == "lemma2" || cs.id == "lemma3" ||
             cs.id == "aux_identities") {
    LemmaReport rep;
    if (cs.id == "lemma1") rep = verify_lemma1(spec, points, res.tolerance);
    if (cs.id == "lemma2") rep = verify_lemma2(spec, points, res.tolerance);
    if (cs.id == "lemma3") rep = verify_lemma3(spec, points, res.tolerance);
    if (cs.id == "aux_identities") rep = check_aux_identities(spec, points, res.tolerance);
    res.max_residual = rep.max_residual;
    for (const auto& [k, v] : rep.aux) res.aux[k] = v;
    pass = rep.pass;
  } else if (cs.id == "gradient_rs" || cs.id == "rs_lie" || cs.id == "qes") {
    SolitonMode mode = cs.id == "gradient_rs" ? SolitonMode::RicciGradient
                       : cs.id == "rs_lie"    ? SolitonMode::RicciLie
                                              : SolitonMode::QuasiEinstein;
    SolitonParams params = soliton_params_from(ctx, cs, mode);
    double worst = 0.0;
    for (const Vec& p : points) {
      Mat r = params.mode == SolitonMode::RicciLie ? rs_lie_residual(spec, params, p.data())
              : params.mode == SolitonMode::RicciGradient
                  ? gradient_rs_residual(spec, params, p.data())
                  : qes_residual(spec, params, p.data());
      worst = std::max(worst, r.max_abs());
    }
    res.max_residual = worst;
    if (params.mode == SolitonMode::TauEinstein) res.aux["mode"] = "tau_einstein";
    pass = worst <= res.tolerance;
  } else if (cs.id == "df_collinear") {
    ScalarFieldSpec pot = ScalarFieldSpec::from_text(spec, cs.potential);
    double worst = 0.0, c1_sum = 0.0;
    for (const Vec& p : points) {
      CollinearResult r = check_df_collinear(spec, pot, p.data());
      worst = std::max(worst, r.residual);
      c1_sum += r.c1;
    }
    res.max_residual = worst;
    res.aux["c1_mean"] = c1_sum / static_cast<double>(points.size());
    pass = worst <= res.tolerance;
  } else if (cs.id == "theorem1" || cs.id == "theorem2") {
    SolitonMode mode =
        cs.id == "theorem1" ? SolitonMode::RicciGradient : SolitonMode::QuasiEinstein;
    SolitonParams params = soliton_params_from(ctx, cs, mode);
    TheoremVerdict v = theorem_pipeline(spec, params, points, res.tolerance);
    res.max_residual = std::max(v.soliton_residual_max, v.conclusion_residual_max);
    res.aux = verdict_to_aux(v);
    pass = v.verdict == "pf";
  } else if (cs.id == "pf_decompose") {
    double worst = 0.0, a1_sum = 0.0, b1_sum = 0.0;
    for (const Vec& p : points) {
      CurvaturePack pack = curvature_pack(spec, p.data(), false);
      MetricAtPoint m = metric_at(spec, p.data(), 0);
      ObserverFrame fr = observer_frame(spec, p.data());
      PFDecomposition pf = pf_decompose(pack.ricci, m.g, m.g_inv, fr.eta, res.tolerance);
      worst = std::max(worst, pf.residual);
      a1_sum += pf.a1;
      b1_sum += pf.b1;
    }
    res.max_residual = worst;
    res.aux["a1_mean"] = a1_sum / static_cast<double>(points.size());
    res.aux["b1_mean"] = b1_sum / static_cast<double>(points.size());
    pass = worst <= res.tolerance;
  } else if (cs.id == "stress_energy") {
    double k = cs.numbers.count("k") ? cs.numbers.at("k") : 1.0;
    double worst_fit = 0.0, worst_consistency = 0.0, p_sum = 0.0, nu_sum = 0.0;
    for (const Vec& p : points) {
      StressEnergyResult se = stress_energy(spec, p.data(), k);
      CurvaturePack pack = curvature_pack(spec, p.data(), false);
      MetricAtPoint m = metric_at(spec, p.data(), 0);
      ObserverFrame fr = observer_frame(spec, p.data());
      PFDecomposition pf = pf_decompose(pack.ricci, m.g, m.g_inv, fr.eta, res.tolerance);
      FluidState st = pressure_density(pf, spec.n, k);
      worst_fit = std::max(worst_fit, se.fit_residual);
      worst_consistency = std::max(
          worst_consistency, std::max(std::fabs(se.p - st.p), std::fabs(se.nu - st.nu)));
      p_sum += se.p;
      nu_sum += se.nu;
    }
    res.max_residual = worst_consistency;
    res.aux["fit_residual_max"] = worst_fit;
    res.aux["p_mean"] = p_sum / static_cast<double>(points.size());
    res.aux["nu_mean"] = nu_sum / static_cast<double>(points.size());
    pass = worst_consistency <= res.tolerance;
  } else if (cs.id == "eos") {
    double k = cs.numbers.count("k") ? cs.numbers.at("k") : 1.0;
    double era_tol = check_tol(cs, 1e-6);
    std::string era;
    bool uniform = true;
    double p_sum = 0.0, nu_sum = 0.0, omega_sum = 0.0;
    int omega_count = 0;
    for (const Vec& p : points) {
      CurvaturePack pack = curvature_pack(spec, p.data(), false);
      MetricAtPoint m = metric_at(spec, p.data(), 0);
      ObserverFrame fr = observer_frame(spec, p.data());
      PFDecomposition pf = pf_decompose(pack.ricci, m.g, m.g_inv, fr.eta, ctx.sc.tolerance);
      FluidState st = pressure_density(pf, spec.n, k);
      std::string label = era_name(eos_classify(st, era_tol));
      if (era.empty()) era = label;
      if (label != era) uniform = false;
      p_sum += st.p;
      nu_sum += st.nu;
      if (st.omega_defined) {
        omega_sum += st.omega;
        ++omega_count;
      }
    }
    res.tolerance = era_tol;
    res.aux["era"] = era;
    res.aux["era_uniform"] = uniform;
    res.aux["p_mean"] = p_sum / static_cast<double>(points.size());
    res.aux["nu_mean"] = nu_sum / static_cast<double>(points.size());
    if (omega_count > 0) res.aux["omega_mean"] = omega_sum / omega_count;
    pass = uniform;
  } else if (cs.id == "remark_eos") {
    double k = cs.numbers.count("k") ? cs.numbers.at("k") : 1.0;
    double coefficient = cs.numbers.at("coefficient");
    ScalarFieldSpec pot = ScalarFieldSpec::from_text(spec, cs.potential);
    std::vector<double> psis;
    double c1_sum = 0.0;
    for (const Vec& p : points) {
      psis.push_back(observer_frame(spec, p.data()).psi);
      c1_sum += check_df_collinear(spec, pot, p.data()).c1;
    }
    double c1 = c1_sum / static_cast<double>(points.size());
    RemarkEosReport rep = remark_eos_check(c1, psis, coefficient, spec.n, k, res.tolerance);
    res.max_residual = rep.spread;
    res.aux["c1"] = c1;
    res.aux["constant_value"] = rep.constant_value;
    res.aux["expected_constant"] = rep.expected_constant;
    res.aux["paper_combination_mean"] = [&] {
      double s = 0.0;
      for (double v : rep.three_p_minus_nu) s += v;
      return s / static_cast<double>(rep.three_p_minus_nu.size());
    }();
    res.aux["omega_one_third_case"] = rep.omega_one_third_case;
    pass = rep.constant_ok;
  } else if (cs.id == "div_weyl") {
    double worst = 0.0;
    for (const Vec& p : points)
      worst = std::max(worst, third_order_pack(spec, p.data()).div_weyl.max_abs());
    res.max_residual = worst;
    pass = worst <= res.tolerance;
  } else if (cs.id == "fiber_constant_curvature") {
    int plane_count = cs.numbers.count("planes")
                          ? static_cast<int>(cs.numbers.at("planes"))
                          : 20;
    double tol = check_tol(cs, 1e-9);
    std::mt19937_64 rng(ctx.seed ^ 0x9e3779b97f4a7c15ULL);
    const int d = spec.n - 1;
    double k_min = 0.0, k_max = 0.0;
    bool first = true;
    ReportValue::Object witness_min, witness_max;
    int made = 0;
    long long guard = 0;
    while (made < plane_count && guard < 100LL * plane_count) {
      ++guard;
      // Fiber point drawn from the spatial bounds; plane vectors from [-1,1].
      Vec fp(d);
      for (int i = 0; i < d; ++i) {
        auto [lo, hi] = ctx.sc.sampling.bounds[i];
        fp(i) = lo + (hi - lo) * uniform01(rng);
      }
      std::vector<double> x(d), y(d);
      for (int i = 0; i < d; ++i) x[i] = 2.0 * uniform01(rng) - 1.0;
      for (int i = 0; i < d; ++i) y[i] = 2.0 * uniform01(rng) - 1.0;
      double kappa;
      try {
        kappa = fiber_sectional(spec, fp.data(), x, y);
      } catch (const ValidationError&) {
        continue;  // degenerate draw or off-chart point; redraw
      }
      auto record = [&](ReportValue::Object& w) {
        ReportValue::Array pt, xv, yv;
        for (int i = 0; i < d; ++i) pt.push_back(fp(i));
        for (int i = 0; i < d; ++i) xv.push_back(x[i]);
        for (int i = 0; i < d; ++i) yv.push_back(y[i]);
        w["point"] = pt;
        w["x"] = xv;
        w["y"] = yv;
        w["sectional"] = kappa;
      };
      if (first || kappa < k_min) {
        k_min = first ? kappa : std::min(k_min, kappa);
        record(witness_min);
      }
      if (first || kappa > k_max) {
        k_max = first ? kappa : std::max(k_max, kappa);
        record(witness_max);
      }
      first = false;
      ++made;
    }
    if (made == 0) throw EvalError("fiber sectional curvature: no admissible plane draws");
    double spread = k_max - k_min;
    bool constant = spread <= tol;
    bool rw = constant && d == 3;
    res.tolerance = tol;
    res.max_residual = spread;
    res.aux["planes"] = made;
    res.aux["sectional_min"] = k_min;
    res.aux["sectional_max"] = k_max;
    res.aux["constant"] = constant;
    res.aux["rw_spacetime"] = rw;
    res.aux["witness_min"] = witness_min;
    res.aux["witness_max"] = witness_max;
    pass = constant;
  } else {
    throw ConfigError("unknown check id '" + cs.id + "'");
  }

  res.verdict = cs.report_only ? "info" : (pass ? "pass" : "fail");
  return res;
}

ReportValue::Object conventions_block() {
  ReportValue::Object conv;
  conv["signature"] = "(+,...,+,-), time last, g_tt = -1";
  conv["riemann_sign"] = "R(U,V)W = nabla_U nabla_V W - nabla_V nabla_U W - nabla_[U,V] W";
  conv["ricci_contraction"] = "S_ik = R^j_ijk; de Sitter (H=1, n=4) gives S = +3 g";
  conv["observer"] = "rho = +d/dt, future-directed; eta = g(rho, .), eta(rho) = -1";
  conv["report_floats"] = "%.17g";
  return conv;
}

}  // namespace

CheckReport run_scenario(const Scenario& sc) {
  validate_scenario(sc);

  FiberSpec fiber;
  switch (sc.fiber_kind) {
    case FiberKind::Flat:
      fiber = FiberSpec::flat(sc.n - 1);
      break;
    case FiberKind::ConstantCurvature:
      fiber = FiberSpec::constant_curvature(sc.n - 1, sc.k_star);
      break;
    case FiberKind::CustomDiagonal:
      fiber = FiberSpec::custom_diagonal(sc.fiber_entries, sc.n - 1, sc.constants);
      break;
  }
  SpacetimeSpec spec = build_grw(sc.n, sc.warp, std::move(fiber), sc.constants);

  CheckReport rep;
  rep.scenario_name = sc.name;
  rep.version = std::string(kToolName) + " " + kToolVersion;
  rep.conventions = conventions_block();
  rep.seed = sc.sampling.seed;
  rep.points_requested = sc.sampling.count;

  SampledPoints sampled = sample_points(spec, sc.sampling);
  rep.points_admissible = static_cast<int>(sampled.points.size());
  rep.points_rejected = sampled.rejected;
  rep.rejected_points = sampled.rejected_points;

  CheckContext ctx{sc, spec, sampled.points, sc.sampling.seed};
  bool all_pass = true;
  for (const CheckSpec& cs : sc.checks) {
    CheckResult result;
    try {
      result = run_check(ctx, cs);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      result.id = cs.id;
      result.points_evaluated = static_cast<int>(sampled.points.size());
      result.verdict = "error";
      result.error = e.what();
    }
    if (result.counts_against_overall()) all_pass = false;
    rep.checks.push_back(std::move(result));
  }
  rep.overall_pass = all_pass;
  return rep;
}

std::string render_json(const CheckReport& rep) {
  ReportValue::Object root;
  root["scenario"] = rep.scenario_name;
  root["version"] = rep.version;
  root["conventions"] = rep.conventions;
  ReportValue::Object pts;
  pts["requested"] = rep.points_requested;
  pts["admissible"] = rep.points_admissible;
  pts["rejected"] = rep.points_rejected;
  pts["seed"] = static_cast<std::int64_t>(rep.seed);
  if (!rep.rejected_points.empty()) {
    ReportValue::Array rejected;
    for (const Vec& p : rep.rejected_points) {
      ReportValue::Array coords;
      for (int i = 0; i < p.extent(); ++i) coords.push_back(p(i));
      rejected.push_back(coords);
    }
    pts["rejected_sample"] = rejected;
  }
  root["points"] = pts;

  ReportValue::Array checks;
  for (const CheckResult& c : rep.checks) {
    ReportValue::Object o;
    o["id"] = c.id;
    o["points_evaluated"] = c.points_evaluated;
    o["verdict"] = c.verdict;
    if (c.verdict == "error") {
      o["error"] = c.error;
    } else {
      o["max_residual"] = c.max_residual;
      o["tolerance"] = c.tolerance;
      o["aux"] = c.aux;
    }
    checks.push_back(o);
  }
  root["checks"] = checks;
  root["overall"] = rep.overall_pass ? "pass" : "fail";
  return ReportValue(root).to_json();
}

namespace {

void render_aux_text(std::string& out, const std::string& prefix, const ReportValue::Object& aux);

std::string scalar_to_text(const ReportValue& v) {
  std::string json = v.to_json();
  if (!json.empty() && json.back() == '\n') json.pop_back();
  return json;
}

void render_aux_text(std::string& out, const std::string& prefix,
                     const ReportValue::Object& aux) {
  for (const auto& [k, v] : aux) {
    out += prefix + k + " = ";
    std::string body = scalar_to_text(v);
    // Flatten multi-line nested values onto one line for the table format.
    std::string flat;
    bool last_space = false;
    for (char ch : body) {
      char c = (ch == '\n') ? ' ' : ch;
      if (c == ' ' && last_space) continue;
      last_space = (c == ' ');
      flat += c;
    }
    out += flat + "\n";
  }
}

}  // namespace

std::string render_text(const CheckReport& rep) {
  std::string out;
  out += "scenario: " + rep.scenario_name + "\n";
  out += "version:  " + rep.version + "\n";
  for (const auto& [k, v] : rep.conventions)
    out += "convention " + k + ": " + scalar_to_text(v) + "\n";
  out += "points: requested=" + std::to_string(rep.points_requested) +
         " admissible=" + std::to_string(rep.points_admissible) +
         " rejected=" + std::to_string(rep.points_rejected) +
         " seed=" + std::to_string(rep.seed) + "\n";
  out += "\n";

  char line[160];
  std::snprintf(line, sizeof(line), "%-26s %6s %-24s %-12s %s\n", "check", "points",
                "max_residual", "tolerance", "verdict");
  out += line;
  out += std::string(80, '-') + "\n";
  for (const CheckResult& c : rep.checks) {
    if (c.verdict == "error") {
      std::snprintf(line, sizeof(line), "%-26s %6d %-24s %-12s %s\n", c.id.c_str(),
                    c.points_evaluated, "-", "-", "error");
      out += line;
      out += "    error = " + c.error + "\n";
      continue;
    }
    char residual[32], tol[32];
    std::snprintf(residual, sizeof(residual), "%.17g", c.max_residual);
    std::snprintf(tol, sizeof(tol), "%.3g", c.tolerance);
    std::snprintf(line, sizeof(line), "%-26s %6d %-24s %-12s %s\n", c.id.c_str(),
                  c.points_evaluated, residual, tol, c.verdict.c_str());
    out += line;
    render_aux_text(out, "    ", c.aux);
  }
  out += "\n";
  out += std::string("overall: ") + (rep.overall_pass ? "PASS" : "FAIL") + "\n";
  return out;
}

std::vector<std::pair<std::string, std::string>> list_checks() { return kChecks; }

}  // namespace grw
