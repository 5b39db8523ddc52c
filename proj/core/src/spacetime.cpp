#include "grw/spacetime.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "grw/errors.hpp"

namespace grw {

FiberSpec FiberSpec::flat(int dim) {
  FiberSpec f;
  f.kind = FiberKind::Flat;
  f.dim = dim;
  return f;
}

FiberSpec FiberSpec::constant_curvature(int dim, double k_star) {
  FiberSpec f;
  f.kind = FiberKind::ConstantCurvature;
  f.dim = dim;
  f.k_star = k_star;
  return f;
}

FiberSpec FiberSpec::custom_diagonal(std::vector<Expr> entries) {
  FiberSpec f;
  f.kind = FiberKind::CustomDiagonal;
  f.dim = static_cast<int>(entries.size());
  f.entries = std::move(entries);
  return f;
}

FiberSpec FiberSpec::custom_diagonal(const std::vector<std::string>& entry_text, int dim,
                                     const std::map<std::string, double>& constants) {
  if (static_cast<int>(entry_text.size()) != dim)
    throw ValidationError("custom fiber needs one diagonal entry per fiber dimension");
  VarTable vt = full_var_table(dim + 1, constants);
  vt.names.pop_back();  // fiber expressions live in the fiber coordinates only
  FiberSpec f;
  f.kind = FiberKind::CustomDiagonal;
  f.dim = dim;
  f.entry_text = entry_text;
  for (const auto& s : entry_text) f.entries.push_back(parse_expr(s, vt));
  return f;
}

std::vector<std::string> SpacetimeSpec::coord_names() const {
  std::vector<std::string> names;
  for (int i = 1; i < n; ++i) names.push_back("x" + std::to_string(i));
  names.push_back("t");
  return names;
}

VarTable SpacetimeSpec::var_table() const { return full_var_table(n, constants); }

VarTable full_var_table(int n, const std::map<std::string, double>& constants) {
  VarTable vt;
  for (int i = 1; i < n; ++i) vt.names.push_back("x" + std::to_string(i));
  vt.names.push_back("t");
  const char* xyz[3] = {"x", "y", "z"};
  for (int i = 0; i < 3 && i < n - 1; ++i) vt.aliases[xyz[i]] = i;
  vt.constants = constants;
  return vt;
}

double SpacetimeSpec::warp_value(std::span<const double> point) const {
  double t = point[t_index()];
  return eval(warp, std::span<const double>(&t, 1));
}

namespace {

// Conformal factor expression 1 + (k/4) sum x_i^2 over the fiber coordinates.
Expr conformal_denominator(int fiber_dim, double k_star) {
  Expr s = expr::constant(0.0);
  for (int i = 0; i < fiber_dim; ++i)
    s = expr::add(s, expr::mul(expr::variable(i), expr::variable(i)));
  return expr::add(expr::constant(1.0), expr::mul(expr::constant(k_star / 4.0), s));
}

}  // namespace

SpacetimeSpec build_grw(int n, const std::string& warp_text, FiberSpec fiber,
                        const std::map<std::string, double>& constants) {
  if (n < 4) throw ValidationError("spacetime dimension must be at least 4");
  if (fiber.dim != n - 1)
    throw ValidationError("fiber dimension must equal n-1");
  if (fiber.kind == FiberKind::CustomDiagonal) {
    if (static_cast<int>(fiber.entries.size()) != n - 1)
      throw ValidationError("custom fiber needs n-1 diagonal entries");
    for (const auto& e : fiber.entries)
      if (expr::max_var_index(e) >= n - 1)
        throw ValidationError("custom fiber entry references a non-fiber coordinate");
  }

  SpacetimeSpec spec;
  spec.n = n;
  spec.warp_text = warp_text;
  spec.fiber = std::move(fiber);
  spec.constants = constants;

  VarTable warp_vt;
  warp_vt.names = {"t"};
  warp_vt.constants = constants;
  spec.warp = parse_expr(warp_text, warp_vt);

  // Assemble the diagonal components in full coordinates.
  std::vector<int> to_time{n - 1};  // warp variable t -> last coordinate
  Expr warp_full = expr::remap_vars(spec.warp, to_time);
  Expr fsq = expr::mul(warp_full, warp_full);

  for (int a = 0; a < n - 1; ++a) {
    Expr fiber_entry;
    switch (spec.fiber.kind) {
      case FiberKind::Flat:
        fiber_entry = expr::constant(1.0);
        break;
      case FiberKind::ConstantCurvature: {
        Expr den = conformal_denominator(n - 1, spec.fiber.k_star);
        fiber_entry = expr::div(expr::constant(1.0), expr::mul(den, den));
        break;
      }
      case FiberKind::CustomDiagonal:
        fiber_entry = spec.fiber.entries[a];
        break;
    }
    spec.diag.push_back(expr::mul(fsq, fiber_entry));
  }
  spec.diag.push_back(expr::constant(-1.0));
  return spec;
}

void validate_point(const SpacetimeSpec& spec, std::span<const double> point) {
  if (static_cast<int>(point.size()) != spec.n)
    throw ValidationError("point dimension does not match spacetime dimension");
  double f = spec.warp_value(point);
  if (!(f > 0.0) || !std::isfinite(f)) {
    std::ostringstream os;
    os << "warp function must be positive at sampled points (f = " << f << ")";
    throw ValidationError(os.str());
  }
  if (spec.fiber.kind == FiberKind::ConstantCurvature) {
    double s = 0.0;
    for (int i = 0; i < spec.n - 1; ++i) s += point[i] * point[i];
    double den = 1.0 + spec.fiber.k_star / 4.0 * s;
    if (!(den > 0.0))
      throw ValidationError("point outside the conformal chart of the fiber");
  }
  if (spec.fiber.kind == FiberKind::CustomDiagonal) {
    for (int a = 0; a < spec.n - 1; ++a) {
      double v = eval(spec.fiber.entries[a], point.first(spec.n - 1));
      if (!(v > 0.0) || !std::isfinite(v))
        throw ValidationError("custom fiber entry non-positive at sampled point");
    }
  }
}

bool point_admissible(const SpacetimeSpec& spec, std::span<const double> point) {
  try {
    validate_point(spec, point);
    return true;
  } catch (const ValidationError&) {
    return false;
  } catch (const EvalError&) {
    return false;
  }
}

MetricAtPoint metric_at(const SpacetimeSpec& spec, std::span<const double> point, int order) {
  validate_point(spec, point);
  const int n = spec.n;

  MetricAtPoint m;
  m.point = Vec(n);
  for (int i = 0; i < n; ++i) m.point(i) = point[i];
  m.order = order;
  m.g = Mat(n);
  m.g_inv = Mat(n);
  if (order >= 1) m.dg = Tensor3(n);
  if (order >= 2) m.d2g = Tensor4(n);
  if (order >= 3) m.d3g = Tensor5(n);

  for (int a = 0; a < n; ++a) {
    Jet j = jet_eval(spec.diag[a], point, order);
    m.g(a, a) = j.value();
    if (order >= 1)
      for (int i = 0; i < n; ++i) m.dg(i, a, a) = j.d1(i);
    if (order >= 2)
      for (int i = 0; i < n; ++i)
        for (int k = i; k < n; ++k) m.d2g(i, k, a, a) = m.d2g(k, i, a, a) = j.d2(i, k);
    if (order >= 3)
      for (int i = 0; i < n; ++i)
        for (int k = i; k < n; ++k)
          for (int l = k; l < n; ++l) {
            double v = j.d3(i, k, l);
            m.d3g(i, k, l, a, a) = m.d3g(i, l, k, a, a) = m.d3g(k, i, l, a, a) = v;
            m.d3g(k, l, i, a, a) = m.d3g(l, i, k, a, a) = m.d3g(l, k, i, a, a) = v;
          }
  }

  Eigen::MatrixXd ge(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) ge(i, j) = m.g(i, j);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(ge);
  m.det = lu.determinant();

  double scale = 1.0;
  for (int i = 0; i < n; ++i) scale *= ge.row(i).norm();
  if (std::fabs(m.det) < 1e-12 * scale) throw EvalError("degenerate metric at point");

  Eigen::MatrixXd inv = lu.inverse();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.g_inv(i, j) = inv(i, j);
  return m;
}

}  // namespace grw
