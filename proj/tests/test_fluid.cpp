#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "grw/curvature.hpp"
#include "grw/errors.hpp"
#include "grw/fluid.hpp"
#include "grw/observer.hpp"
#include "support/test_family.hpp"

using namespace grw;

namespace {

// Minkowski-style frame for synthetic decomposition inputs.
struct Frame {
  Mat g, g_inv;
  Vec eta;
};

Frame flat_frame() {
  Frame f{Mat(4), Mat(4), Vec(4)};
  for (int i = 0; i < 3; ++i) {
    f.g(i, i) = 1.0;
    f.g_inv(i, i) = 1.0;
  }
  f.g(3, 3) = -1.0;
  f.g_inv(3, 3) = -1.0;
  f.eta(3) = -1.0;
  return f;
}

}  // namespace

TEST_CASE("pf decomposition closed forms") {
  Frame f = flat_frame();

  Mat s3(4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s3(i, j) = 3.0 * f.g(i, j);
  PFDecomposition pf = pf_decompose(s3, f.g, f.g_inv, f.eta);
  CHECK(pf.a1 == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(std::fabs(pf.b1) <= 1e-13);
  CHECK(pf.residual <= 1e-13);
  CHECK(pf.is_pf);

  Mat zero(4);
  PFDecomposition pf0 = pf_decompose(zero, f.g, f.g_inv, f.eta);
  CHECK(pf0.a1 == 0.0);
  CHECK(pf0.b1 == 0.0);
  CHECK(pf0.is_pf);

  // an off-diagonal spatial entry cannot be absorbed by g and eta x eta
  Mat bad = s3;
  bad(0, 1) = bad(1, 0) = 0.1;
  PFDecomposition pfb = pf_decompose(bad, f.g, f.g_inv, f.eta);
  CHECK(pfb.residual >= 0.1);
  CHECK(!pfb.is_pf);
}

TEST_CASE("pf decomposition recovers synthetic coefficients exactly") {
  std::mt19937_64 rng(515);
  Frame f = flat_frame();
  for (int it = 0; it < 200; ++it) {
    double a1 = 10.0 * (2.0 * testing::unit_draw(rng) - 1.0);
    double b1 = 10.0 * (2.0 * testing::unit_draw(rng) - 1.0);
    Mat s(4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) s(i, j) = a1 * f.g(i, j) + b1 * f.eta(i) * f.eta(j);
    PFDecomposition pf = pf_decompose(s, f.g, f.g_inv, f.eta);
    CHECK(std::fabs(pf.a1 - a1) <= 1e-12 * (1.0 + std::fabs(a1)));
    CHECK(std::fabs(pf.b1 - b1) <= 1e-12 * (1.0 + std::fabs(b1)));
    CHECK(pf.residual <= 1e-12 * (1.0 + std::fabs(a1) + std::fabs(b1)));
  }
}

TEST_CASE("pressure/density inversion examples and errors") {
  PFDecomposition pf;
  pf.a1 = 3.0;
  pf.b1 = 0.0;
  FluidState st = pressure_density(pf, 4, 1.0);
  CHECK(st.p == doctest::Approx(-3.0).epsilon(1e-14));
  CHECK(st.nu == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(st.omega_defined);
  CHECK(st.omega == doctest::Approx(-1.0).epsilon(1e-14));

  PFDecomposition zero;
  FluidState st0 = pressure_density(zero, 4, 1.0);
  CHECK(st0.p == 0.0);
  CHECK(st0.nu == 0.0);
  CHECK(!st0.omega_defined);

  CHECK_THROWS_AS(pressure_density(pf, 4, 0.0), ValidationError);
  CHECK_THROWS_AS(pressure_density(pf, 2, 1.0), ValidationError);
}

TEST_CASE("pressure/density round-trip property") {
  std::mt19937_64 rng(951);
  for (int it = 0; it < 1000; ++it) {
    double p = 5.0 * (2.0 * testing::unit_draw(rng) - 1.0);
    double nu = 5.0 * (2.0 * testing::unit_draw(rng) - 1.0);
    double k = 0.2 + 2.0 * testing::unit_draw(rng);
    int n = 3 + static_cast<int>(rng() % 4);

    PFDecomposition pf;
    pf.b1 = k * k * (p + nu);
    pf.a1 = k * k * (p - nu) / (2.0 - n);
    FluidState st = pressure_density(pf, n, k);
    CHECK(std::fabs(st.p - p) <= 1e-12 * (1.0 + std::fabs(p)));
    CHECK(std::fabs(st.nu - nu) <= 1e-12 * (1.0 + std::fabs(nu)));
  }
}

TEST_CASE("stress energy closed forms") {
  testing::Fixture mink = testing::make_fixture("minkowski");
  std::vector<double> origin{0.0, 0.0, 0.0, 0.0};
  StressEnergyResult t0 = stress_energy(mink.spec, origin, 1.0);
  CHECK(t0.T.max_abs() <= 1e-12);
  CHECK_THROWS_AS(stress_energy(mink.spec, origin, 0.0), ValidationError);

  // de Sitter: T = (3 - 6) g = -3 g, so p = -3 and nu = 3
  testing::Fixture ds = testing::make_fixture("desitter");
  StressEnergyResult tds = stress_energy(ds.spec, origin, 1.0);
  CHECK(tds.p == doctest::Approx(-3.0).epsilon(1e-10));
  CHECK(tds.nu == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(tds.fit_residual <= 1e-10);

  // dust: pressure vanishes
  testing::Fixture dust = testing::make_fixture("flrw_dust");
  std::vector<double> p1{0.0, 0.0, 0.0, 1.0};
  StressEnergyResult td = stress_energy(dust.spec, p1, 1.0);
  CHECK(std::fabs(td.p) <= 1e-10);
  CHECK(td.nu == doctest::Approx(4.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("field-equation route agrees with the ricci-fit route") {
  for (const auto& name : testing::default_fixture_names()) {
    testing::Fixture fx = testing::make_fixture(name);
    if (fx.spec.n != 4) continue;
    auto pts = testing::sample_admissible(fx, 5, 2718);
    for (const Vec& q : pts) {
      StressEnergyResult se = stress_energy(fx.spec, q.data(), 1.3);
      CurvaturePack pack = curvature_pack(fx.spec, q.data(), false);
      MetricAtPoint m = metric_at(fx.spec, q.data(), 0);
      ObserverFrame fr = observer_frame(fx.spec, q.data());
      PFDecomposition pf = pf_decompose(pack.ricci, m.g, m.g_inv, fr.eta);
      FluidState st = pressure_density(pf, fx.spec.n, 1.3);
      INFO(name);
      CHECK(std::fabs(se.p - st.p) <= 1e-9 * (1.0 + std::fabs(st.p)));
      CHECK(std::fabs(se.nu - st.nu) <= 1e-9 * (1.0 + std::fabs(st.nu)));
    }
  }
}

TEST_CASE("era classification thresholds and precedence") {
  auto classify = [](double p, double nu) {
    FluidState st;
    st.p = p;
    st.nu = nu;
    st.omega_defined = std::fabs(nu) > 1e-12;
    st.omega = st.omega_defined ? p / nu : 0.0;
    return eos_classify(st);
  };
  CHECK(classify(0.0, 1.0) == EraLabel::Dust);
  CHECK(classify(1.0 / 3.0, 1.0) == EraLabel::Radiation);
  CHECK(classify(-1.0, 1.0) == EraLabel::DarkEnergy);
  CHECK(classify(-1.5, 1.0) == EraLabel::Phantom);
  CHECK(classify(0.4, 1.0) == EraLabel::Other);
  // precedence: p = nu = 0 satisfies dust first
  CHECK(classify(0.0, 0.0) == EraLabel::Dust);
  CHECK(era_name(EraLabel::DarkEnergy) == "dark_energy");

  FluidState nan_state;
  nan_state.p = std::nan("");
  nan_state.nu = 1.0;
  CHECK_THROWS_AS(eos_classify(nan_state), ValidationError);
}

TEST_CASE("fluid chain on the cosmological fixtures") {
  testing::Fixture dust = testing::make_fixture("flrw_dust");
  auto dpts = testing::sample_admissible(dust, 10, 33);
  for (const Vec& q : dpts) {
    CurvaturePack pack = curvature_pack(dust.spec, q.data(), false);
    MetricAtPoint m = metric_at(dust.spec, q.data(), 0);
    ObserverFrame fr = observer_frame(dust.spec, q.data());
    PFDecomposition pf = pf_decompose(pack.ricci, m.g, m.g_inv, fr.eta);
    FluidState st = pressure_density(pf, 4, 1.0);
    CHECK(std::fabs(st.p) <= 1e-7 * (1.0 + std::fabs(st.nu)));
    CHECK(eos_classify(st) == EraLabel::Dust);
  }

  testing::Fixture rad = testing::make_fixture("flrw_radiation");
  auto rpts = testing::sample_admissible(rad, 10, 34);
  for (const Vec& q : rpts) {
    CurvaturePack pack = curvature_pack(rad.spec, q.data(), false);
    MetricAtPoint m = metric_at(rad.spec, q.data(), 0);
    ObserverFrame fr = observer_frame(rad.spec, q.data());
    PFDecomposition pf = pf_decompose(pack.ricci, m.g, m.g_inv, fr.eta);
    FluidState st = pressure_density(pf, 4, 1.0);
    CHECK(std::fabs(st.p - st.nu / 3.0) <= 1e-6 * (1.0 + std::fabs(st.nu)));
    CHECK(eos_classify(st) == EraLabel::Radiation);
  }

  testing::Fixture ds = testing::make_fixture("desitter");
  auto spts = testing::sample_admissible(ds, 10, 35);
  for (const Vec& q : spts) {
    CurvaturePack pack = curvature_pack(ds.spec, q.data(), false);
    MetricAtPoint m = metric_at(ds.spec, q.data(), 0);
    ObserverFrame fr = observer_frame(ds.spec, q.data());
    PFDecomposition pf = pf_decompose(pack.ricci, m.g, m.g_inv, fr.eta);
    FluidState st = pressure_density(pf, 4, 1.0);
    CHECK(st.omega == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(eos_classify(st) == EraLabel::DarkEnergy);
  }
}

TEST_CASE("remark check: constants and the omega = -1/3 flag") {
  // de Sitter trivial gradient soliton: c1 = 0, coefficient = -lambda1 = 3.
  std::vector<double> psis{1.0, 1.0, 1.0};
  RemarkEosReport rep = remark_eos_check(0.0, psis, 3.0, 4, 1.0);
  CHECK(rep.constant_ok);
  CHECK(rep.constant_value == doctest::Approx(-6.0).epsilon(1e-12));
  CHECK(rep.expected_constant == doctest::Approx(-6.0).epsilon(1e-12));
  // the combination printed in the source material evaluates to -12 here;
  // reported per point as data
  CHECK(rep.three_p_minus_nu[0] == doctest::Approx(-12.0).epsilon(1e-12));
  CHECK(!rep.omega_one_third_case);

  // vanishing coefficient puts the fluid on omega = -1/3 regardless of psi
  std::vector<double> psis2{0.7, 1.1, 1.3};
  RemarkEosReport rep2 = remark_eos_check(2.0, psis2, 0.0, 4, 1.0);
  CHECK(rep2.constant_ok);
  CHECK(std::fabs(rep2.constant_value) <= 1e-12);
  CHECK(rep2.omega_one_third_case);

  // 3p + nu stays constant even when c1 psi varies; the literal 3p - nu
  // combination does not
  RemarkEosReport rep4 = remark_eos_check(1.0, psis2, 3.0, 4, 1.0);
  CHECK(rep4.constant_ok);
  double lit_min = rep4.three_p_minus_nu[0], lit_max = rep4.three_p_minus_nu[0];
  for (double v : rep4.three_p_minus_nu) {
    lit_min = std::min(lit_min, v);
    lit_max = std::max(lit_max, v);
  }
  CHECK(lit_max - lit_min > 0.1);

  CHECK_THROWS_AS(remark_eos_check(0.0, psis, 3.0, 5, 1.0), ValidationError);
}
