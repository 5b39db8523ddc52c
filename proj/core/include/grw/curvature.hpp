#pragma once

#include <span>
#include <string>
#include <vector>

#include "grw/spacetime.hpp"
#include "grw/tensor.hpp"

namespace grw {

// Scalar field on the spacetime (soliton potentials). Distinct from the warp
// even though the literature overloads the name f for both.
struct ScalarFieldSpec {
  Expr field;
  std::string text;

  static ScalarFieldSpec from_text(const SpacetimeSpec& spec, const std::string& text);
  static ScalarFieldSpec from_expr(Expr e);
};

// Vector field given by contravariant components in the full coordinates.
struct VectorFieldSpec {
  std::vector<Expr> components;
  std::vector<std::string> text;

  static VectorFieldSpec from_text(const SpacetimeSpec& spec, const std::vector<std::string>& comps);
  static VectorFieldSpec from_exprs(std::vector<Expr> comps);
};

// Everything curvature-related at a single point.
//
// Index conventions (validated by the de Sitter closed form in the tests):
//   gamma(k,i,j)      Gamma^k_ij
//   riem_up(l,i,j,k)  l-component of R(e_j, e_k) e_i,
//                     R(U,V)W = nabla_U nabla_V W - nabla_V nabla_U W
//                               - nabla_[U,V] W
//   riem_down(l,i,j,k) = g_lm riem_up(m,i,j,k)
//   ricci(i,k)        = riem_up(j,i,j,k) summed over j
// With these choices de Sitter (H = 1, n = 4) has ricci = +3 g.
struct CurvaturePack {
  Vec point;
  int n = 0;

  Tensor3 gamma;
  Tensor4 riem_up;
  Tensor4 riem_down;
  Mat ricci;
  double scalar = 0.0;
  bool has_weyl = false;
  Tensor4 weyl;

  // Filled by third_order_pack only.
  bool has_third_order = false;
  Tensor3 dricci;       // dricci(i,j,k)      = d_i S_jk (raw partial)
  Tensor3 nabla_ricci;  // nabla_ricci(i,j,k) = nabla_i S_jk
  Vec dr;               // dr(i) = d_i r
  Tensor3 div_weyl;     // div_weyl(i,j,k), see div C assembly in curvature.cpp
  Tensor4 dgamma;       // dgamma(m,k,i,j)    = d_m Gamma^k_ij

  // Self-checks recomputed on every pack (tests pin their magnitudes).
  double metric_compat_residual = 0.0;      // max |nabla_i g_jk|
  double contracted_bianchi_residual = 0.0; // max |div S - dr/2|, third order only
};

Tensor3 christoffel(const SpacetimeSpec& spec, std::span<const double> point);

// Curvature through the Weyl tensor; needs order-2 metric jets.
CurvaturePack curvature_pack(const SpacetimeSpec& spec, std::span<const double> point,
                             bool with_weyl = true);

// Adds exact Ricci derivatives, dr, and the assembled divergence of the Weyl
// tensor; needs order-3 metric jets.
CurvaturePack third_order_pack(const SpacetimeSpec& spec, std::span<const double> point);

// Max-norm of the cyclic covariant-derivative sum of the Riemann tensor,
// computed from order-3 metric jets. Zero (to rounding) for every metric.
double second_bianchi_residual(const SpacetimeSpec& spec, std::span<const double> point);

// (Hess f)_ij = d_i d_j f - Gamma^k_ij d_k f.
Mat hessian(const SpacetimeSpec& spec, const ScalarFieldSpec& field,
            std::span<const double> point);

// (L_W g)_ij = nabla_i W_j + nabla_j W_i with W lowered by g.
Mat lie_metric(const SpacetimeSpec& spec, const VectorFieldSpec& w,
               std::span<const double> point);

// Sectional curvature of the fiber metric g* at a fiber point (n-1
// coordinates) for the plane spanned by two fiber tangent vectors.
double fiber_sectional(const SpacetimeSpec& spec, std::span<const double> fiber_point,
                       std::span<const double> plane_x, std::span<const double> plane_y);

}  // namespace grw
