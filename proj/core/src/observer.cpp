#include "grw/observer.hpp"

#include <cmath>

#include "grw/errors.hpp"

namespace grw {

void LemmaReport::finalize(double tol) {
  tolerance = tol;
  max_residual = 0.0;
  for (double r : per_point) max_residual = std::max(max_residual, r);
  pass = max_residual <= tol;
}

ObserverFrame observer_frame(const SpacetimeSpec& spec, std::span<const double> point) {
  validate_point(spec, point);
  const int n = spec.n;
  const int t = spec.t_index();

  ObserverFrame fr;
  fr.point = Vec(n);
  for (int i = 0; i < n; ++i) fr.point(i) = point[i];
  fr.rho = Vec(n);
  fr.eta = Vec(n);
  fr.rho(t) = 1.0;
  fr.eta(t) = -1.0;

  double tv = point[t];
  Jet f = jet_eval(spec.warp, std::span<const double>(&tv, 1), 2);
  fr.psi = f.d1(0) / f.value();
  fr.mu = f.d2(0, 0) / f.value();

  CurvaturePack pack = curvature_pack(spec, point, false);
  fr.xi = -pack.ricci(t, t);  // S(rho,rho) = xi eta(rho) = -xi
  return fr;
}

double check_torse_forming(const SpacetimeSpec& spec, std::span<const double> point) {
  ObserverFrame fr = observer_frame(spec, point);
  MetricAtPoint m = metric_at(spec, point, 0);
  Tensor3 gamma = christoffel(spec, point);
  const int n = spec.n;
  const int t = spec.t_index();

  // nabla_i eta_j = -Gamma^k_ij eta_k = Gamma^t_ij since eta is constant.
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double lhs = gamma(t, i, j);
      double rhs = fr.psi * (m.g(i, j) + fr.eta(i) * fr.eta(j));
      worst = std::max(worst, std::fabs(lhs - rhs));
    }
  return worst;
}

RicciEigenResult check_ricci_eigenvector(const SpacetimeSpec& spec,
                                         std::span<const double> point) {
  ObserverFrame fr = observer_frame(spec, point);
  CurvaturePack pack = curvature_pack(spec, point, false);
  MetricAtPoint m = metric_at(spec, point, 0);
  const int n = spec.n;
  const int t = spec.t_index();

  RicciEigenResult res;
  res.xi = -pack.ricci(t, t);

  // (Q rho)^i = g^ij S_jk rho^k
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    double q = 0.0;
    for (int j = 0; j < n; ++j) q += m.g_inv(i, j) * pack.ricci(j, t);
    double target = res.xi * fr.rho(i);
    worst = std::max(worst, std::fabs(q - target));
  }
  res.residual = worst;
  res.xi_vs_mu_residual = std::fabs(res.xi - (n - 1) * fr.mu) / (1.0 + std::fabs(res.xi));
  res.degenerate = std::fabs(res.xi) <= kDefaultTolerance;
  return res;
}

LemmaReport verify_lemma1(const SpacetimeSpec& spec, std::span<const Vec> points, double tol) {
  LemmaReport rep;
  rep.id = "lemma1";
  const int n = spec.n;
  const int t = spec.t_index();
  double worst_riemann = 0.0, worst_ricci = 0.0;

  for (const Vec& p : points) {
    std::span<const double> pt(p.data());
    ObserverFrame fr = observer_frame(spec, pt);
    CurvaturePack pack = curvature_pack(spec, pt, false);

    double riemann_form = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int l = 0; l < n; ++l) {
          // (R(e_a, e_b) rho)^l vs mu [eta_b delta^l_a - eta_a delta^l_b]
          double lhs = pack.riem_up(l, t, a, b);
          double rhs = fr.mu * (fr.eta(b) * (l == a ? 1.0 : 0.0) -
                                fr.eta(a) * (l == b ? 1.0 : 0.0));
          riemann_form = std::max(riemann_form, std::fabs(lhs - rhs));
        }

    double ricci_form = 0.0;
    for (int a = 0; a < n; ++a) {
      double lhs = pack.ricci(a, t);  // S(e_a, rho)
      double rhs = (n - 1) * fr.mu * fr.eta(a);
      ricci_form = std::max(ricci_form, std::fabs(lhs - rhs));
    }

    worst_riemann = std::max(worst_riemann, riemann_form);
    worst_ricci = std::max(worst_ricci, ricci_form);
    rep.per_point.push_back(std::max(riemann_form, ricci_form));
  }
  rep.aux["riemann_form_max"] = worst_riemann;
  rep.aux["ricci_form_max"] = worst_ricci;
  rep.finalize(tol);
  return rep;
}

LemmaReport verify_lemma2(const SpacetimeSpec& spec, std::span<const Vec> points, double tol) {
  LemmaReport rep;
  rep.id = "lemma2";
  const int n = spec.n;
  const int t = spec.t_index();
  double worst_literal = 0.0, mu_abs_max = 0.0;

  for (const Vec& p : points) {
    std::span<const double> pt(p.data());
    ObserverFrame fr = observer_frame(spec, pt);
    CurvaturePack pack = third_order_pack(spec, pt);

    // mu measured through the Ricci tensor: mu = -S_tt / (n-1) as a scalar
    // field, so U(mu) is a raw partial of that component function.
    double contracted = 0.0;
    for (int a = 0; a < n; ++a) {
      double u_mu = -pack.dricci(a, t, t) / (n - 1);
      double rho_mu = -pack.dricci(t, t, t) / (n - 1);
      contracted = std::max(contracted, std::fabs(u_mu + rho_mu * fr.eta(a)));
    }

    // Literal uncontracted form: mu {U + eta(U) rho} over basis U, reported
    // without a verdict.
    double literal = 0.0;
    for (int a = 0; a < n; ++a)
      for (int l = 0; l < n; ++l) {
        double comp = fr.mu * ((l == a ? 1.0 : 0.0) + fr.eta(a) * fr.rho(l));
        literal = std::max(literal, std::fabs(comp));
      }

    rep.per_point.push_back(contracted);
    worst_literal = std::max(worst_literal, literal);
    mu_abs_max = std::max(mu_abs_max, std::fabs(fr.mu));
  }
  rep.aux["literal_form_max"] = worst_literal;
  rep.aux["mu_abs_max"] = mu_abs_max;
  rep.finalize(tol);
  return rep;
}

LemmaReport verify_lemma3(const SpacetimeSpec& spec, std::span<const Vec> points, double tol) {
  LemmaReport rep;
  rep.id = "lemma3";
  const int n = spec.n;
  const int t = spec.t_index();

  for (const Vec& p : points) {
    std::span<const double> pt(p.data());
    CurvaturePack pack = third_order_pack(spec, pt);
    MetricAtPoint m = metric_at(spec, pt, 0);

    // g((nabla_rho Q) U - (nabla_U Q) rho, rho) with (nabla_i Q)^k_j
    // = g^kl nabla_i S_lj; the inner product with rho contracts with eta_k.
    double worst = 0.0;
    for (int a = 0; a < n; ++a) {
      double term1 = 0.0, term2 = 0.0;
      for (int k = 0; k < n; ++k) {
        double q1 = 0.0, q2 = 0.0;
        for (int l = 0; l < n; ++l) {
          q1 += m.g_inv(k, l) * pack.nabla_ricci(t, l, a);
          q2 += m.g_inv(k, l) * pack.nabla_ricci(a, l, t);
        }
        double eta_k = (k == t) ? -1.0 : 0.0;
        term1 += eta_k * q1;
        term2 += eta_k * q2;
      }
      worst = std::max(worst, std::fabs(term1 - term2));
    }
    rep.per_point.push_back(worst);
  }
  rep.finalize(tol);
  return rep;
}

LemmaReport check_aux_identities(const SpacetimeSpec& spec, std::span<const Vec> points,
                                 double tol) {
  LemmaReport rep;
  rep.id = "aux_identities";
  const int n = spec.n;
  const int t = spec.t_index();
  double worst_psi = 0.0, worst_curvature_form = 0.0, worst_bianchi = 0.0;

  for (const Vec& p : points) {
    std::span<const double> pt(p.data());
    ObserverFrame fr = observer_frame(spec, pt);
    CurvaturePack pack = third_order_pack(spec, pt);

    // psi measured through the connection: psi = Gamma^a_{a t} for any
    // spatial a (no sum); its gradient comes from dgamma.
    double psi_val = pack.gamma(0, 0, t);
    double rho_psi = pack.dgamma(t, 0, 0, t);
    double psi_res = 0.0;
    for (int a = 0; a < n; ++a) {
      double u_psi = pack.dgamma(a, 0, 0, t);
      psi_res = std::max(psi_res, std::fabs(u_psi + rho_psi * fr.eta(a)));
    }

    // Full curvature form of nabla rho with the measured psi gradient:
    // R(U,V)rho = (U psi)[V + eta(V) rho] - (V psi)[U + eta(U) rho]
    //             + psi^2 [eta(V) U - eta(U) V].
    double curv_res = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double a_psi = pack.dgamma(a, 0, 0, t);
        double b_psi = pack.dgamma(b, 0, 0, t);
        for (int l = 0; l < n; ++l) {
          double da = (l == a) ? 1.0 : 0.0;
          double db = (l == b) ? 1.0 : 0.0;
          double rhs = a_psi * (db + fr.eta(b) * fr.rho(l)) -
                       b_psi * (da + fr.eta(a) * fr.rho(l)) +
                       psi_val * psi_val * (fr.eta(b) * da - fr.eta(a) * db);
          double lhs = pack.riem_up(l, t, a, b);
          curv_res = std::max(curv_res, std::fabs(lhs - rhs));
        }
      }

    double bianchi = second_bianchi_residual(spec, pt);

    worst_psi = std::max(worst_psi, psi_res);
    worst_curvature_form = std::max(worst_curvature_form, curv_res);
    worst_bianchi = std::max(worst_bianchi, bianchi);
    rep.per_point.push_back(std::max({psi_res, curv_res, bianchi}));
  }
  rep.aux["expansion_gradient_max"] = worst_psi;
  rep.aux["curvature_form_max"] = worst_curvature_form;
  rep.aux["bianchi_cyclic_max"] = worst_bianchi;
  rep.finalize(tol);
  return rep;
}

}  // namespace grw
