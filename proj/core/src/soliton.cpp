#include "grw/soliton.hpp"

#include <cmath>
#include <limits>

#include "grw/errors.hpp"

namespace grw {

namespace {

const ScalarFieldSpec& require_potential(const SolitonParams& params) {
  if (!params.potential) throw ValidationError("soliton parameters need a potential function");
  return *params.potential;
}

}  // namespace

Mat rs_lie_residual(const SpacetimeSpec& spec, const SolitonParams& params,
                    std::span<const double> point) {
  if (!params.w) throw ValidationError("Lie-mode soliton parameters need a vector field");
  Mat lie = lie_metric(spec, *params.w, point);
  CurvaturePack pack = curvature_pack(spec, point, false);
  MetricAtPoint m = metric_at(spec, point, 0);
  const int n = spec.n;
  Mat res(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      res(i, j) = 0.5 * lie(i, j) + pack.ricci(i, j) + params.lambda1 * m.g(i, j);
  return res;
}

Mat gradient_rs_residual(const SpacetimeSpec& spec, const SolitonParams& params,
                         std::span<const double> point) {
  Mat hess = hessian(spec, require_potential(params), point);
  CurvaturePack pack = curvature_pack(spec, point, false);
  MetricAtPoint m = metric_at(spec, point, 0);
  const int n = spec.n;
  Mat res(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      res(i, j) = hess(i, j) + pack.ricci(i, j) + params.lambda1 * m.g(i, j);
  return res;
}

Mat qes_residual(const SpacetimeSpec& spec, const SolitonParams& params,
                 std::span<const double> point) {
  const bool finite_m = params.mode == SolitonMode::QuasiEinstein;
  if (finite_m && !(params.m > 0.0))
    throw ValidationError("quasi-Einstein soliton needs m > 0");
  const ScalarFieldSpec& pot = require_potential(params);

  Mat hess = hessian(spec, pot, point);
  CurvaturePack pack = curvature_pack(spec, point, false);
  MetricAtPoint m = metric_at(spec, point, 0);
  Jet f = jet_eval(pot.field, point, 1);
  const int n = spec.n;
  const double beta1 = params.lambda1 + params.tau * pack.scalar;

  Mat res(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = hess(i, j) + pack.ricci(i, j) - beta1 * m.g(i, j);
      if (finite_m) v -= f.d1(i) * f.d1(j) / params.m;
      res(i, j) = v;
    }
  return res;
}

CollinearResult check_df_collinear(const SpacetimeSpec& spec, const ScalarFieldSpec& potential,
                                   std::span<const double> point) {
  validate_point(spec, point);
  MetricAtPoint m = metric_at(spec, point, 0);
  Jet f = jet_eval(potential.field, point, 1);
  const int n = spec.n;
  const int t = spec.t_index();

  CollinearResult res;
  res.c1 = f.d1(t);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    double df_up = 0.0;
    for (int j = 0; j < n; ++j) df_up += m.g_inv(i, j) * f.d1(j);
    double rho_i = (i == t) ? 1.0 : 0.0;
    worst = std::max(worst, std::fabs(df_up + res.c1 * rho_i));
  }
  res.residual = worst;
  return res;
}

TheoremVerdict theorem_pipeline(const SpacetimeSpec& spec, const SolitonParams& params,
                                std::span<const Vec> points, double tol) {
  if (points.empty()) throw ValidationError("theorem pipeline needs at least one point");
  if (!params.gradient_mode())
    throw ValidationError("theorem pipeline applies to gradient soliton modes");
  const ScalarFieldSpec& pot = require_potential(params);
  const bool qes_mode =
      params.mode == SolitonMode::QuasiEinstein || params.mode == SolitonMode::TauEinstein;
  const int n = spec.n;
  const int t = spec.t_index();

  TheoremVerdict v;

  // ---- hypothesis audit -----------------------------------------------
  double mu_abs_max = 0.0;
  for (const Vec& p : points) {
    std::span<const double> pt(p.data());
    Mat res = qes_mode ? qes_residual(spec, params, pt) : gradient_rs_residual(spec, params, pt);
    v.soliton_residual_max = std::max(v.soliton_residual_max, res.max_abs());

    CollinearResult col = check_df_collinear(spec, pot, pt);
    v.c1_values.push_back(col.c1);
    v.collinearity_max = std::max(v.collinearity_max, col.residual);

    ObserverFrame fr = observer_frame(spec, pt);
    mu_abs_max = std::max(mu_abs_max, std::fabs(fr.mu));
    if (qes_mode) {
      CurvaturePack pack = curvature_pack(spec, pt, false);
      double beta1 = params.lambda1 + params.tau * pack.scalar;
      v.beta1_values.push_back(beta1);
      double rel = std::fabs(beta1 - (n - 1) * fr.mu) / (1.0 + std::fabs(beta1));
      v.beta1_vs_mu_residual = std::max(v.beta1_vs_mu_residual, rel);
    }
  }
  v.is_soliton = v.soliton_residual_max <= tol;
  v.mu_degenerate = mu_abs_max <= tol;

  auto mean_std = [](const std::vector<double>& xs, double& mean, double& sd) {
    double s = 0.0;
    for (double x : xs) s += x;
    mean = s / static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    sd = std::sqrt(var / static_cast<double>(xs.size()));
  };
  mean_std(v.c1_values, v.c1_mean, v.c1_std);
  v.c1_constant = v.c1_std <= 1e-8 * (1.0 + std::fabs(v.c1_mean));
  if (qes_mode) {
    mean_std(v.beta1_values, v.beta1_mean, v.beta1_std);
    v.beta1_constant = v.beta1_std <= 1e-8 * (1.0 + std::fabs(v.beta1_mean));
  }

  v.hypothesis_ok = v.is_soliton && v.c1_constant;
  if (qes_mode)
    v.hypothesis_ok = v.hypothesis_ok && v.beta1_constant &&
                      v.beta1_vs_mu_residual <= 1e-7;

  if (!v.is_soliton) {
    v.verdict = "hypothesis_fails: not a soliton at the sampled points";
    return v;
  }
  if (!v.c1_constant) {
    v.verdict = "hypothesis_fails: rho f is not constant across points";
    return v;
  }
  if (qes_mode && !v.beta1_constant) {
    v.verdict = "hypothesis_fails: beta1 is not constant across points";
    return v;
  }
  if (qes_mode && v.beta1_vs_mu_residual > 1e-7) {
    v.verdict = "hypothesis_fails: beta1 does not equal (n-1) mu";
    return v;
  }
  if (v.mu_degenerate) {
    // The flat case: the Ricci eigenvalue on rho vanishes, which the source
    // argument excludes. Reported, not errored.
    v.verdict = "degenerate: xi = 0 at the sampled points (contradiction case)";
    return v;
  }

  // ---- conclusion ------------------------------------------------------
  const double c1 = v.c1_mean;
  v.branch = std::fabs(c1) > tol ? "c1_nonzero" : "c1_zero";

  double worst_conclusion = 0.0, worst_pf = 0.0, worst_b1 = 0.0, worst_divc = 0.0;
  double a1_sum = 0.0, b1_sum = 0.0;
  for (const Vec& p : points) {
    std::span<const double> pt(p.data());
    ObserverFrame fr = observer_frame(spec, pt);
    CurvaturePack pack = curvature_pack(spec, pt, false);
    MetricAtPoint m = metric_at(spec, pt, 0);

    double beta1 = params.lambda1 + params.tau * pack.scalar;
    double iso = qes_mode ? (c1 * fr.psi + beta1) : (c1 * fr.psi - params.lambda1);
    if (v.branch == "c1_zero") iso = qes_mode ? beta1 : -params.lambda1;

    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double aniso = (v.branch == "c1_nonzero") ? c1 * fr.psi * fr.eta(i) * fr.eta(j) : 0.0;
        double fit = iso * m.g(i, j) + aniso;
        worst_conclusion = std::max(worst_conclusion, std::fabs(pack.ricci(i, j) - fit));
      }

    if (v.branch == "c1_zero") {
      CurvaturePack third = third_order_pack(spec, pt);
      worst_divc = std::max(worst_divc, third.div_weyl.max_abs());
    }

    PFDecomposition pf = pf_decompose(pack.ricci, m.g, m.g_inv, fr.eta, tol);
    a1_sum += pf.a1;
    b1_sum += pf.b1;
    worst_pf = std::max(worst_pf, pf.residual);
    worst_b1 = std::max(worst_b1, std::fabs(pf.b1 - c1 * fr.psi));
    (void)t;
  }

  v.conclusion_residual_max = worst_conclusion;
  v.div_weyl_max = worst_divc;
  v.pf_residual_max = worst_pf;
  v.pf_a1_mean = a1_sum / static_cast<double>(points.size());
  v.pf_b1_mean = b1_sum / static_cast<double>(points.size());
  v.b1_vs_c1psi_max = worst_b1;

  bool conclusion_ok = worst_conclusion <= tol && worst_pf <= tol;
  if (v.branch == "c1_zero") conclusion_ok = conclusion_ok && worst_divc <= tol;
  v.pf_concluded = conclusion_ok;
  v.verdict = conclusion_ok ? "pf" : "conclusion_residual_exceeds_tolerance";
  return v;
}

}  // namespace grw
