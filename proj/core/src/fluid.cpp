#include "grw/fluid.hpp"

#include <cmath>

#include "grw/curvature.hpp"
#include "grw/errors.hpp"

namespace grw {

PFDecomposition pf_decompose(const Mat& ricci, const Mat& g, const Mat& g_inv, const Vec& eta,
                             double tol) {
  const int n = g.extent();

  // rho^i = g^ij eta_j; for a unit timelike eta, g(rho,rho) = -1.
  Vec rho(n);
  for (int i = 0; i < n; ++i) {
    double v = 0.0;
    for (int j = 0; j < n; ++j) v += g_inv(i, j) * eta(j);
    rho(i) = v;
  }

  double s_rho_rho = 0.0, trace = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      s_rho_rho += ricci(i, j) * rho(i) * rho(j);
      trace += g_inv(i, j) * ricci(i, j);
    }

  // S(rho,rho) = b1 - a1 and tr S = n a1 - b1 pin the two coefficients.
  PFDecomposition pf;
  pf.a1 = (trace + s_rho_rho) / (n - 1);
  pf.b1 = s_rho_rho + pf.a1;

  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double fit = pf.a1 * g(i, j) + pf.b1 * eta(i) * eta(j);
      worst = std::max(worst, std::fabs(ricci(i, j) - fit));
    }
  pf.residual = worst;
  pf.is_pf = worst <= tol;
  return pf;
}

StressEnergyResult stress_energy(const SpacetimeSpec& spec, std::span<const double> point,
                                 double k) {
  if (k == 0.0) throw ValidationError("gravitational coupling k must be nonzero");
  CurvaturePack pack = curvature_pack(spec, point, false);
  MetricAtPoint m = metric_at(spec, point, 0);
  const int n = spec.n;
  const int t = spec.t_index();

  StressEnergyResult res;
  res.T = Mat(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      res.T(i, j) = (pack.ricci(i, j) - 0.5 * pack.scalar * m.g(i, j)) / (k * k);

  // Fit against (nu + p) eta x eta + p g: T(rho,rho) = nu and
  // tr T = (n-1) p - nu.
  double t_rho_rho = res.T(t, t);  // rho = d/dt with unit components
  double trace = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) trace += m.g_inv(i, j) * res.T(i, j);
  res.nu = t_rho_rho;
  res.p = (trace + t_rho_rho) / (n - 1);

  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double eta_i = (i == t) ? -1.0 : 0.0;
      double eta_j = (j == t) ? -1.0 : 0.0;
      double fit = (res.nu + res.p) * eta_i * eta_j + res.p * m.g(i, j);
      worst = std::max(worst, std::fabs(res.T(i, j) - fit));
    }
  res.fit_residual = worst;
  return res;
}

FluidState pressure_density(const PFDecomposition& pf, int n, double k) {
  if (k == 0.0) throw ValidationError("gravitational coupling k must be nonzero");
  if (n < 3) throw ValidationError("pressure/density inversion needs dimension >= 3");

  FluidState st;
  st.k = k;
  double p_plus_nu = pf.b1 / (k * k);
  double p_minus_nu = pf.a1 * (2.0 - n) / (k * k);
  st.p = 0.5 * (p_plus_nu + p_minus_nu);
  st.nu = 0.5 * (p_plus_nu - p_minus_nu);
  st.omega_defined = std::fabs(st.nu) > 1e-12 * (1.0 + std::fabs(st.p));
  st.omega = st.omega_defined ? st.p / st.nu : 0.0;
  return st;
}

std::string era_name(EraLabel era) {
  switch (era) {
    case EraLabel::Dust: return "dust";
    case EraLabel::Radiation: return "radiation";
    case EraLabel::DarkEnergy: return "dark_energy";
    case EraLabel::Phantom: return "phantom";
    case EraLabel::Other: return "other";
  }
  return "?";
}

EraLabel eos_classify(const FluidState& state, double tol) {
  if (!std::isfinite(state.p) || !std::isfinite(state.nu))
    throw ValidationError("non-finite fluid state");
  double scale = 1.0 + std::fabs(state.nu);
  if (std::fabs(state.p) <= tol * scale) return EraLabel::Dust;
  if (std::fabs(state.p - state.nu / 3.0) <= tol * scale) return EraLabel::Radiation;
  if (std::fabs(state.p + state.nu) <= tol * scale) return EraLabel::DarkEnergy;
  if (state.omega_defined && state.omega < -1.0 - tol) return EraLabel::Phantom;
  return EraLabel::Other;
}

RemarkEosReport remark_eos_check(double c1, std::span<const double> psi_values,
                                 double coefficient, int n, double k, double tol) {
  if (n != 4) throw ValidationError("equation-of-state remark check is stated for n = 4");
  if (psi_values.empty()) throw ValidationError("remark check needs at least one point");

  RemarkEosReport rep;
  rep.expected_constant = -2.0 * coefficient / (k * k);
  double sum = 0.0;
  for (double psi : psi_values) {
    PFDecomposition pf;
    pf.a1 = c1 * psi + coefficient;
    pf.b1 = c1 * psi;
    FluidState st = pressure_density(pf, n, k);
    rep.three_p_plus_nu.push_back(3.0 * st.p + st.nu);
    rep.three_p_minus_nu.push_back(3.0 * st.p - st.nu);
    sum += 3.0 * st.p + st.nu;
  }
  rep.constant_value = sum / static_cast<double>(rep.three_p_plus_nu.size());

  double var = 0.0;
  for (double v : rep.three_p_plus_nu) var += (v - rep.constant_value) * (v - rep.constant_value);
  rep.spread = std::sqrt(var / static_cast<double>(rep.three_p_plus_nu.size()));
  rep.constant_ok = rep.spread <= tol * (1.0 + std::fabs(rep.constant_value));
  rep.omega_one_third_case =
      rep.constant_ok && std::fabs(rep.constant_value) <= tol * (1.0 + std::fabs(coefficient));
  return rep;
}

}  // namespace grw
