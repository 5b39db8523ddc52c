#pragma once

#include <span>
#include <string>
#include <vector>

#include "grw/spacetime.hpp"
#include "grw/tensor.hpp"

namespace grw {

// Fit of a Ricci tensor to the perfect-fluid form S = a1 g + b1 eta x eta
// for a unit timelike covector eta. The fit is a closed-form projection
// (rho-rho component plus trace), exact on genuine perfect-fluid inputs; the
// residual then measures the anisotropic remainder.
struct PFDecomposition {
  double a1 = 0.0;
  double b1 = 0.0;
  double residual = 0.0;
  bool is_pf = false;
};

PFDecomposition pf_decompose(const Mat& ricci, const Mat& g, const Mat& g_inv, const Vec& eta,
                             double tol = 1e-7);

// Stress-energy tensor extracted from the field equations T = (S - r g / 2) / k^2.
struct StressEnergyResult {
  Mat T;
  double p = 0.0;   // fitted against (nu + p) eta x eta + p g
  double nu = 0.0;
  double fit_residual = 0.0;
};

StressEnergyResult stress_energy(const SpacetimeSpec& spec, std::span<const double> point,
                                 double k);

struct FluidState {
  double p = 0.0;
  double nu = 0.0;
  double omega = 0.0;
  bool omega_defined = false;
  double k = 1.0;
};

// Inverts b1 = k^2 (p + nu), a1 = k^2 (p - nu) / (2 - n).
FluidState pressure_density(const PFDecomposition& pf, int n, double k);

enum class EraLabel { Dust, Radiation, DarkEnergy, Phantom, Other };

std::string era_name(EraLabel era);

// Era thresholds are relative (scaled by 1 + |nu|); precedence is
// dust, radiation, dark energy, phantom, other.
EraLabel eos_classify(const FluidState& state, double tol = 1e-6);

// Checks the equation-of-state consequence of the concluded Ricci form in
// dimension 4: per point a1 = c1 psi + coefficient and b1 = c1 psi give a
// fluid whose combination 3p + nu is the constant -2 coefficient / k^2. The
// combination 3p - nu printed in the source material is reported per point as
// data; it is not constant in general. When the constant vanishes the fluid
// has omega = -1/3, reported under a distinct flag without assigning an era.
struct RemarkEosReport {
  std::vector<double> three_p_plus_nu;
  std::vector<double> three_p_minus_nu;
  double constant_value = 0.0;     // mean of 3p + nu
  double expected_constant = 0.0;  // -2 coefficient / k^2
  double spread = 0.0;             // sample std of 3p + nu
  bool constant_ok = false;
  bool omega_one_third_case = false;  // 3p + nu = 0: omega = -1/3
};

RemarkEosReport remark_eos_check(double c1, std::span<const double> psi_values,
                                 double coefficient, int n, double k,
                                 double tol = 1e-7);

}  // namespace grw
