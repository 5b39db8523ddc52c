#include "grw/curvature.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "grw/errors.hpp"

namespace grw {

ScalarFieldSpec ScalarFieldSpec::from_text(const SpacetimeSpec& spec, const std::string& text) {
  ScalarFieldSpec f;
  f.text = text;
  f.field = parse_expr(text, spec.var_table());
  return f;
}

ScalarFieldSpec ScalarFieldSpec::from_expr(Expr e) {
  ScalarFieldSpec f;
  f.field = std::move(e);
  return f;
}

VectorFieldSpec VectorFieldSpec::from_text(const SpacetimeSpec& spec,
                                           const std::vector<std::string>& comps) {
  if (static_cast<int>(comps.size()) != spec.n)
    throw ValidationError("vector field needs one component per coordinate");
  VectorFieldSpec w;
  w.text = comps;
  VarTable vt = spec.var_table();
  for (const auto& s : comps) w.components.push_back(parse_expr(s, vt));
  return w;
}

VectorFieldSpec VectorFieldSpec::from_exprs(std::vector<Expr> comps) {
  VectorFieldSpec w;
  w.components = std::move(comps);
  return w;
}

namespace {

// n x n matrix of jets, row-major.
struct JetMat {
  int n = 0;
  std::vector<Jet> m;

  JetMat() = default;
  JetMat(int n_, const JetLayout& L) : n(n_), m(static_cast<std::size_t>(n_) * n_, Jet(L)) {}
  Jet& at(int i, int j) { return m[static_cast<std::size_t>(i) * n + j]; }
  const Jet& at(int i, int j) const { return m[static_cast<std::size_t>(i) * n + j]; }
};

// Inverse of a jet-valued symmetric matrix. The constant part is inverted in
// plain doubles; the nilpotent remainder enters through a Neumann series,
// exact at the truncation order.
JetMat jet_inverse(const JetMat& g, const JetLayout& L) {
  const int n = g.n;
  Eigen::MatrixXd g0(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g0(i, j) = g.at(i, j).value();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(g0);
  double scale = 1.0;
  for (int i = 0; i < n; ++i) scale *= g0.row(i).norm();
  if (std::fabs(lu.determinant()) < 1e-12 * scale)
    throw EvalError("degenerate metric at point");
  Eigen::MatrixXd inv0 = lu.inverse();

  if (L.order() == 0) {
    JetMat out(n, L);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.at(i, j) = Jet::constant(L, inv0(i, j));
    return out;
  }

  // M = g0^-1 (g - g0); constant term of M is zero.
  JetMat mm(n, L);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet acc(L);
      for (int k = 0; k < n; ++k) {
        Jet d = g.at(k, j);
        d.coeff(0) = 0.0;
        acc += d * inv0(i, k);
      }
      mm.at(i, j) = acc;
    }

  // series = I - M + M^2 - M^3 (M^4 vanishes at order <= 3)
  JetMat series(n, L);
  for (int i = 0; i < n; ++i) series.at(i, i) = Jet::constant(L, 1.0);
  JetMat power = mm;
  double sign = -1.0;
  for (int p = 1; p <= L.order(); ++p) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) series.at(i, j) += power.at(i, j) * sign;
    sign = -sign;
    if (p < L.order()) {
      JetMat next(n, L);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Jet acc(L);
          for (int k = 0; k < n; ++k) acc += power.at(i, k) * mm.at(k, j);
          next.at(i, j) = acc;
        }
      power = next;
    }
  }

  JetMat out(n, L);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet acc(L);
      for (int k = 0; k < n; ++k) acc += series.at(i, k) * inv0(k, j);
      out.at(i, j) = acc;
    }
  return out;
}

// Jet-valued curvature of a diagonal metric, everything derived from the
// metric jets so each quantity carries its own exact partials.
struct CurvatureJets {
  int n = 0;
  int order = 0;           // metric jet order
  JetMat g, ginv;          // at `order`
  std::vector<Jet> gamma;  // at order-1, index (k,i,j)
  std::vector<Jet> riem;   // at order-2, index (l,i,j,k)
  std::vector<Jet> ricci;  // at order-2, index (i,k)
  Jet scalar;              // at order-2

  Jet& gamma_at(int k, int i, int j) { return gamma[(static_cast<std::size_t>(k) * n + i) * n + j]; }
  const Jet& gamma_at(int k, int i, int j) const { return gamma[(static_cast<std::size_t>(k) * n + i) * n + j]; }
  Jet& riem_at(int l, int i, int j, int k) {
    return riem[((static_cast<std::size_t>(l) * n + i) * n + j) * n + k];
  }
  const Jet& riem_at(int l, int i, int j, int k) const {
    return riem[((static_cast<std::size_t>(l) * n + i) * n + j) * n + k];
  }
  Jet& ricci_at(int i, int k) { return ricci[static_cast<std::size_t>(i) * n + k]; }
  const Jet& ricci_at(int i, int k) const { return ricci[static_cast<std::size_t>(i) * n + k]; }
};

CurvatureJets curvature_jets(std::span<const Expr> diag, std::span<const double> point, int order) {
  const int n = static_cast<int>(diag.size());
  const JetLayout& L = JetLayout::get(n, order);

  CurvatureJets c;
  c.n = n;
  c.order = order;
  c.g = JetMat(n, L);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) c.g.at(a, b) = Jet(L);
    c.g.at(a, a) = jet_eval(diag[a], point, order);
  }
  c.ginv = jet_inverse(c.g, L);
  if (order < 1) return c;

  // Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij)
  const JetLayout& L1 = JetLayout::get(n, order - 1);
  JetMat ginv1(n, L1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) ginv1.at(i, j) = c.ginv.at(i, j).truncated(order - 1);

  std::vector<Jet> dg(static_cast<std::size_t>(n) * n * n, Jet(L1));
  auto dg_at = [&](int i, int j, int l) -> Jet& {
    return dg[(static_cast<std::size_t>(i) * n + j) * n + l];
  };
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      Jet gjl = c.g.at(j, l);
      for (int i = 0; i < n; ++i) dg_at(i, j, l) = gjl.partial(i);
    }

  c.gamma.assign(static_cast<std::size_t>(n) * n * n, Jet(L1));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Jet acc(L1);
        for (int l = 0; l < n; ++l) {
          Jet term = dg_at(i, j, l) + dg_at(j, i, l) - dg_at(l, i, j);
          acc += ginv1.at(k, l) * term;
        }
        acc *= 0.5;
        c.gamma_at(k, i, j) = acc;
        c.gamma_at(k, j, i) = acc;
      }
  if (order < 2) return c;

  // R^l_ijk = d_j Gamma^l_ik - d_k Gamma^l_ij
  //           + Gamma^l_jm Gamma^m_ik - Gamma^l_km Gamma^m_ij
  const JetLayout& L2 = JetLayout::get(n, order - 2);
  std::vector<Jet> gamma2(c.gamma.size(), Jet(L2));
  for (std::size_t i = 0; i < c.gamma.size(); ++i) gamma2[i] = c.gamma[i].truncated(order - 2);
  auto gamma2_at = [&](int k, int i, int j) -> const Jet& {
    return gamma2[(static_cast<std::size_t>(k) * n + i) * n + j];
  };

  c.riem.assign(static_cast<std::size_t>(n) * n * n * n, Jet(L2));
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
          Jet acc = c.gamma_at(l, i, k).partial(j) - c.gamma_at(l, i, j).partial(k);
          for (int m = 0; m < n; ++m)
            acc += gamma2_at(l, j, m) * gamma2_at(m, i, k) -
                   gamma2_at(l, k, m) * gamma2_at(m, i, j);
          c.riem_at(l, i, j, k) = acc;
          c.riem_at(l, i, k, j) = -acc;
        }

  c.ricci.assign(static_cast<std::size_t>(n) * n, Jet(L2));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      Jet acc(L2);
      for (int j = 0; j < n; ++j) acc += c.riem_at(j, i, j, k);
      c.ricci_at(i, k) = acc;
    }

  c.scalar = Jet(L2);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      c.scalar += c.ginv.at(i, k).truncated(order - 2) * c.ricci_at(i, k);
  return c;
}

CurvatureJets grw_curvature_jets(const SpacetimeSpec& spec, std::span<const double> point,
                                 int order) {
  validate_point(spec, point);
  return curvature_jets(spec.diag, point, order);
}

double compat_residual(const CurvatureJets& c) {
  // nabla_i g_jk = d_i g_jk - Gamma^m_ij g_mk - Gamma^m_ik g_jm
  const int n = c.n;
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        double v = c.g.at(j, k).d1(i);
        for (int m = 0; m < n; ++m)
          v -= c.gamma_at(m, i, j).value() * c.g.at(m, k).value() +
               c.gamma_at(m, i, k).value() * c.g.at(j, m).value();
        worst = std::max(worst, std::fabs(v));
      }
  return worst;
}

void fill_values(const CurvatureJets& c, CurvaturePack& pack, bool with_weyl) {
  const int n = c.n;
  pack.n = n;
  pack.gamma = Tensor3(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) pack.gamma(k, i, j) = c.gamma_at(k, i, j).value();

  pack.riem_up = Tensor4(n);
  pack.riem_down = Tensor4(n);
  pack.ricci = Mat(n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) pack.riem_up(l, i, j, k) = c.riem_at(l, i, j, k).value();
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double acc = 0.0;
          for (int m = 0; m < n; ++m) acc += c.g.at(l, m).value() * pack.riem_up(m, i, j, k);
          pack.riem_down(l, i, j, k) = acc;
        }
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) pack.ricci(i, k) = c.ricci_at(i, k).value();
  pack.scalar = c.scalar.value();
  pack.metric_compat_residual = compat_residual(c);

  if (with_weyl) {
    if (n < 4) throw ValidationError("Weyl tensor requires dimension >= 4");
    pack.has_weyl = true;
    pack.weyl = Tensor4(n);
    const double r = pack.scalar;
    auto g = [&](int a, int b) { return c.g.at(a, b).value(); };
    auto S = [&](int a, int b) { return pack.ricci(a, b); };
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            double v = pack.riem_down(l, i, j, k);
            v -= (g(l, j) * S(k, i) - g(l, k) * S(j, i) - g(i, j) * S(k, l) +
                  g(i, k) * S(j, l)) /
                 (n - 2);
            v += r * (g(l, j) * g(k, i) - g(l, k) * g(j, i)) / ((n - 1.0) * (n - 2.0));
            pack.weyl(l, i, j, k) = v;
          }
  }
}

}  // namespace

Tensor3 christoffel(const SpacetimeSpec& spec, std::span<const double> point) {
  CurvatureJets c = grw_curvature_jets(spec, point, 1);
  const int n = c.n;
  Tensor3 out(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out(k, i, j) = c.gamma_at(k, i, j).value();
  return out;
}

CurvaturePack curvature_pack(const SpacetimeSpec& spec, std::span<const double> point,
                             bool with_weyl) {
  CurvatureJets c = grw_curvature_jets(spec, point, 2);
  CurvaturePack pack;
  pack.point = Vec(c.n);
  for (int i = 0; i < c.n; ++i) pack.point(i) = point[i];
  fill_values(c, pack, with_weyl);
  return pack;
}

CurvaturePack third_order_pack(const SpacetimeSpec& spec, std::span<const double> point) {
  CurvatureJets c = grw_curvature_jets(spec, point, 3);
  CurvaturePack pack;
  pack.point = Vec(c.n);
  for (int i = 0; i < c.n; ++i) pack.point(i) = point[i];
  fill_values(c, pack, true);

  const int n = c.n;
  pack.has_third_order = true;
  pack.dricci = Tensor3(n);
  pack.nabla_ricci = Tensor3(n);
  pack.dr = Vec(n);
  pack.dgamma = Tensor4(n);

  for (int i = 0; i < n; ++i) {
    pack.dr(i) = c.scalar.d1(i);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) pack.dricci(i, j, k) = c.ricci_at(j, k).d1(i);
  }
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) pack.dgamma(m, k, i, j) = c.gamma_at(k, i, j).d1(m);

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double v = pack.dricci(i, j, k);
        for (int m = 0; m < n; ++m)
          v -= pack.gamma(m, i, j) * pack.ricci(m, k) + pack.gamma(m, i, k) * pack.ricci(j, m);
        pack.nabla_ricci(i, j, k) = v;
      }

  // div C assembled from the exact Ricci derivatives:
  //   div_weyl(i,j,k) = (n-3)/(n-2) [ nabla_i S_jk - nabla_j S_ik
  //                     - (g_jk dr_i - g_ik dr_j) / (2(n-1)) ]
  pack.div_weyl = Tensor3(n);
  const double pref = (n - 3.0) / (n - 2.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double v = pack.nabla_ricci(i, j, k) - pack.nabla_ricci(j, i, k);
        v -= (c.g.at(j, k).value() * pack.dr(i) - c.g.at(i, k).value() * pack.dr(j)) /
             (2.0 * (n - 1.0));
        pack.div_weyl(i, j, k) = pref * v;
      }

  // Contracted second Bianchi identity: g^ij nabla_i S_jk = dr_k / 2.
  double worst = 0.0;
  double scale = 1.0 + std::fabs(pack.scalar) + pack.dr.max_abs();
  for (int k = 0; k < n; ++k) {
    double div_s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) div_s += c.ginv.at(i, j).value() * pack.nabla_ricci(i, j, k);
    worst = std::max(worst, std::fabs(div_s - 0.5 * pack.dr(k)));
  }
  pack.contracted_bianchi_residual = worst / scale;
  return pack;
}

double second_bianchi_residual(const SpacetimeSpec& spec, std::span<const double> point) {
  CurvatureJets c = grw_curvature_jets(spec, point, 3);
  const int n = c.n;
  const JetLayout& L1 = JetLayout::get(n, 1);

  // Riemann with all indices down, as order-1 jets.
  std::vector<Jet> rd(static_cast<std::size_t>(n) * n * n * n, Jet(L1));
  auto rd_at = [&](int l, int i, int j, int k) -> Jet& {
    return rd[((static_cast<std::size_t>(l) * n + i) * n + j) * n + k];
  };
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          Jet acc(L1);
          for (int m = 0; m < n; ++m)
            acc += c.g.at(l, m).truncated(1) * c.riem_at(m, i, j, k);
          rd_at(l, i, j, k) = acc;
        }

  auto nabla_rd = [&](int m, int l, int i, int j, int k) {
    double v = rd_at(l, i, j, k).d1(m);
    for (int p = 0; p < n; ++p) {
      v -= c.gamma_at(p, m, l).value() * rd_at(p, i, j, k).value();
      v -= c.gamma_at(p, m, i).value() * rd_at(l, p, j, k).value();
      v -= c.gamma_at(p, m, j).value() * rd_at(l, i, p, k).value();
      v -= c.gamma_at(p, m, k).value() * rd_at(l, i, j, p).value();
    }
    return v;
  };

  // Cyclic sum over the derivative index and the first antisymmetric pair.
  double worst = 0.0;
  for (int m = 0; m < n; ++m)
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            double v = nabla_rd(m, l, i, j, k) + nabla_rd(l, i, m, j, k) + nabla_rd(i, m, l, j, k);
            worst = std::max(worst, std::fabs(v));
          }
  return worst;
}

Mat hessian(const SpacetimeSpec& spec, const ScalarFieldSpec& field,
            std::span<const double> point) {
  validate_point(spec, point);
  const int n = spec.n;
  Jet f = jet_eval(field.field, point, 2);
  Tensor3 gamma = christoffel(spec, point);
  Mat h(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double v = f.d2(i, j);
      for (int k = 0; k < n; ++k) v -= gamma(k, i, j) * f.d1(k);
      h(i, j) = h(j, i) = v;
    }
  return h;
}

Mat lie_metric(const SpacetimeSpec& spec, const VectorFieldSpec& w,
               std::span<const double> point) {
  if (static_cast<int>(w.components.size()) != spec.n)
    throw ValidationError("vector field arity does not match spacetime dimension");
  CurvatureJets c = grw_curvature_jets(spec, point, 1);
  const int n = c.n;
  const JetLayout& L1 = JetLayout::get(n, 1);

  std::vector<Jet> w_up;
  for (int k = 0; k < n; ++k) w_up.push_back(jet_eval(w.components[k], point, 1));
  std::vector<Jet> w_low(n, Jet(L1));
  for (int j = 0; j < n; ++j) {
    Jet acc(L1);
    for (int k = 0; k < n; ++k) acc += c.g.at(j, k) * w_up[k];
    w_low[j] = acc;
  }

  Mat lie(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double di_wj = w_low[j].d1(i);
      double dj_wi = w_low[i].d1(j);
      double v = di_wj + dj_wi;
      for (int k = 0; k < n; ++k) v -= 2.0 * c.gamma_at(k, i, j).value() * w_low[k].value();
      lie(i, j) = lie(j, i) = v;
    }
  return lie;
}

double fiber_sectional(const SpacetimeSpec& spec, std::span<const double> fiber_point,
                       std::span<const double> plane_x, std::span<const double> plane_y) {
  const int d = spec.n - 1;
  if (static_cast<int>(fiber_point.size()) != d)
    throw ValidationError("fiber point dimension must be n-1");
  if (static_cast<int>(plane_x.size()) != d || static_cast<int>(plane_y.size()) != d)
    throw ValidationError("plane vectors must have fiber dimension");

  // Fiber metric components, without the warp factor.
  std::vector<Expr> diag(d);
  switch (spec.fiber.kind) {
    case FiberKind::Flat:
      for (int a = 0; a < d; ++a) diag[a] = expr::constant(1.0);
      break;
    case FiberKind::ConstantCurvature: {
      Expr s = expr::constant(0.0);
      for (int i = 0; i < d; ++i)
        s = expr::add(s, expr::mul(expr::variable(i), expr::variable(i)));
      Expr den = expr::add(expr::constant(1.0),
                           expr::mul(expr::constant(spec.fiber.k_star / 4.0), s));
      Expr entry = expr::div(expr::constant(1.0), expr::mul(den, den));
      for (int a = 0; a < d; ++a) diag[a] = entry;
      break;
    }
    case FiberKind::CustomDiagonal:
      diag = spec.fiber.entries;
      break;
  }

  for (int a = 0; a < d; ++a) {
    double v = eval(diag[a], fiber_point);
    if (!(v > 0.0)) throw ValidationError("fiber metric entry non-positive at point");
  }

  CurvatureJets c = curvature_jets(diag, fiber_point, 2);

  auto g = [&](int a, int b) { return c.g.at(a, b).value(); };
  double xx = 0.0, yy = 0.0, xy = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      xx += g(a, b) * plane_x[a] * plane_x[b];
      yy += g(a, b) * plane_y[a] * plane_y[b];
      xy += g(a, b) * plane_x[a] * plane_y[b];
    }
  double gram = xx * yy - xy * xy;
  if (!(gram > 1e-12 * (1.0 + std::fabs(xx) * std::fabs(yy))))
    throw ValidationError("degenerate plane for sectional curvature");

  // K = g(R(X,Y)Y, X) / gram
  double num = 0.0;
  for (int l = 0; l < d; ++l)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          double rd = 0.0;
          for (int m = 0; m < d; ++m) rd += g(l, m) * c.riem_at(m, i, j, k).value();
          num += rd * plane_x[l] * plane_y[i] * plane_x[j] * plane_y[k];
        }
  return num / gram;
}

}  // namespace grw
