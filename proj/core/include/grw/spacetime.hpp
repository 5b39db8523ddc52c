#pragma once

#include <map>
#include <string>
#include <vector>

#include "grw/expr.hpp"
#include "grw/tensor.hpp"

namespace grw {

enum class FiberKind { Flat, ConstantCurvature, CustomDiagonal };

// Riemannian factor of the warped product. Constant curvature uses the
// conformally flat chart g*_ab = delta_ab / (1 + (k/4) sum x_i^2)^2, one chart
// with no pole singularities. Custom fibers are diagonal with user-supplied
// positive entries in the fiber coordinates.
struct FiberSpec {
  FiberKind kind = FiberKind::Flat;
  int dim = 3;
  double k_star = 0.0;
  std::vector<Expr> entries;           // CustomDiagonal only
  std::vector<std::string> entry_text; // original expressions, for reports

  static FiberSpec flat(int dim);
  static FiberSpec constant_curvature(int dim, double k_star);
  static FiberSpec custom_diagonal(std::vector<Expr> entries);
  static FiberSpec custom_diagonal(const std::vector<std::string>& entry_text, int dim,
                                   const std::map<std::string, double>& constants);
};

// Warped product of an interval with a Riemannian fiber: coordinates are
// (x1, ..., x_{n-1}, t) with time last, g_tt = -1, g_ab = f(t)^2 g*_ab,
// g_ta = 0. Immutable once built; all evaluations are per point.
struct SpacetimeSpec {
  int n = 4;
  Expr warp;               // in the single variable t
  std::string warp_text;
  FiberSpec fiber;
  std::map<std::string, double> constants;

  // Diagonal metric components in the full coordinate list, warp factor
  // included; assembled by build_grw.
  std::vector<Expr> diag;

  int t_index() const { return n - 1; }
  std::vector<std::string> coord_names() const;
  VarTable var_table() const;

  double warp_value(std::span<const double> point) const;
};

// Variable table for expressions in the full coordinate list: names
// x1..x_{n-1}, t; aliases x, y, z for the first three fiber coordinates.
VarTable full_var_table(int n, const std::map<std::string, double>& constants);

SpacetimeSpec build_grw(int n, const std::string& warp_text, FiberSpec fiber,
                        const std::map<std::string, double>& constants = {});

// Throws ValidationError when the point is outside the chart: warp
// non-positive, conformal factor non-positive, or a custom entry
// non-positive.
void validate_point(const SpacetimeSpec& spec, std::span<const double> point);
bool point_admissible(const SpacetimeSpec& spec, std::span<const double> point);

// Metric components and partials at one point, exact through `order`.
struct MetricAtPoint {
  Vec point;
  int order = 0;
  Mat g, g_inv;
  double det = 0.0;
  Tensor3 dg;    // dg(i,j,k)      = d_i g_jk         (order >= 1)
  Tensor4 d2g;   // d2g(i,j,k,l)   = d_i d_j g_kl     (order >= 2)
  Tensor5 d3g;   // d3g(i,j,k,l,m) = d_i d_j d_k g_lm (order >= 3)
};

MetricAtPoint metric_at(const SpacetimeSpec& spec, std::span<const double> point, int order);

}  // namespace grw
