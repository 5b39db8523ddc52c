#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "grw/errors.hpp"
#include "grw/spacetime.hpp"
#include "support/fd_oracle.hpp"
#include "support/test_family.hpp"

using namespace grw;

TEST_CASE("build_grw validates its inputs") {
  CHECK_THROWS_AS(build_grw(3, "1", FiberSpec::flat(2)), ValidationError);
  CHECK_THROWS_AS(build_grw(4, "1", FiberSpec::flat(4)), ValidationError);
  CHECK_THROWS_AS(build_grw(4, "t +", FiberSpec::flat(3)), ParseError);
  // custom entry referencing t (index 3) is not a fiber expression
  auto bad = FiberSpec::custom_diagonal(
      {expr::constant(1.0), expr::variable(3), expr::constant(1.0)});
  CHECK_THROWS_AS(build_grw(4, "1", bad), ValidationError);
  // arity mismatch: two entries for a three-dimensional fiber
  CHECK_THROWS_AS(FiberSpec::custom_diagonal({"1", "1"}, 3, {}), ValidationError);
}

TEST_CASE("negative warp is rejected per point, not at build time") {
  SpacetimeSpec spec = build_grw(4, "-t", FiberSpec::flat(3));
  std::vector<double> p{0.0, 0.0, 0.0, 1.0};   // f(1) = -1
  CHECK_THROWS_AS(metric_at(spec, p, 0), ValidationError);
  std::vector<double> ok{0.0, 0.0, 0.0, -1.0};  // f(-1) = +1
  CHECK(metric_at(spec, ok, 0).g(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("minkowski metric and all partials") {
  SpacetimeSpec spec = build_grw(4, "1", FiberSpec::flat(3));
  std::vector<double> p{0.3, -0.2, 0.9, 1.7};
  MetricAtPoint m = metric_at(spec, p, 3);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double expect = (i == j) ? (i == 3 ? -1.0 : 1.0) : 0.0;
      CHECK(m.g(i, j) == doctest::Approx(expect));
    }
  CHECK(m.dg.max_abs() == 0.0);
  CHECK(m.d2g.max_abs() == 0.0);
  CHECK(m.d3g.max_abs() == 0.0);
  CHECK(m.det == doctest::Approx(-1.0));
}

TEST_CASE("de sitter slice at t = 0") {
  SpacetimeSpec spec = build_grw(4, "exp(H*t)", FiberSpec::flat(3), {{"H", 1.0}});
  std::vector<double> p{0.0, 0.0, 0.0, 0.0};
  MetricAtPoint m = metric_at(spec, p, 1);
  CHECK(m.g(0, 0) == doctest::Approx(1.0));
  CHECK(m.g(3, 3) == doctest::Approx(-1.0));
  CHECK(m.dg(3, 0, 0) == doctest::Approx(2.0));  // d_t e^{2t} at 0
  CHECK(m.dg(3, 3, 3) == 0.0);
}

TEST_CASE("constant curvature fiber is the identity at the origin") {
  SpacetimeSpec spec = build_grw(4, "1", FiberSpec::constant_curvature(3, 1.0));
  std::vector<double> p{0.0, 0.0, 0.0, 0.0};
  MetricAtPoint m = metric_at(spec, p, 0);
  for (int a = 0; a < 3; ++a) CHECK(m.g(a, a) == doctest::Approx(1.0));
}

TEST_CASE("metric invariants over the fixture family") {
  for (const auto& name : testing::default_fixture_names()) {
    testing::Fixture fx = testing::make_fixture(name);
    auto pts = testing::sample_admissible(fx, 10, 0xABCDEF);
    REQUIRE(pts.size() == 10);
    for (const Vec& p : pts) {
      MetricAtPoint m = metric_at(fx.spec, p.data(), 2);
      const int n = fx.spec.n;

      // symmetry and warped-product block structure
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          CHECK(m.g(i, j) == m.g(j, i));
          if (i == n - 1 && j != n - 1) CHECK(m.g(i, j) == 0.0);
        }
      for (int i = 0; i < n; ++i) CHECK(m.dg(i, n - 1, n - 1) == 0.0);

      // g * g_inv = identity
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double acc = 0.0;
          for (int k = 0; k < n; ++k) acc += m.g(i, k) * m.g_inv(k, j);
          CHECK(std::fabs(acc - (i == j ? 1.0 : 0.0)) <= 1e-12);
        }

      // Lorentzian signature: det < 0 and exactly one negative diagonal
      // entry (the metric is diagonal in this chart).
      CHECK(m.det < 0.0);
      int negatives = 0;
      for (int i = 0; i < n; ++i)
        if (m.g(i, i) < 0.0) ++negatives;
      CHECK(negatives == 1);
    }
  }
}

TEST_CASE("metric partials agree with central differences") {
  for (const auto& name : {"desitter", "closed_rw", "anisotropic_fiber", "wavy"}) {
    testing::Fixture fx = testing::make_fixture(name);
    auto pts = testing::sample_admissible(fx, 5, 99);
    for (const Vec& p : pts) {
      MetricAtPoint m = metric_at(fx.spec, p.data(), 2);
      const int n = fx.spec.n;
      auto comp = [&](int a, int b) {
        return [&, a, b](std::vector<double> x) { return metric_at(fx.spec, x, 0).g(a, b); };
      };
      std::vector<double> x(p.data());
      for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
          if (m.g(a, b) == 0.0 && a != b) continue;
          for (int i = 0; i < n; ++i) {
            double fd1 = testing::fd_d1(comp(a, b), x, i, 1e-5);
            CHECK(std::fabs(m.dg(i, a, b) - fd1) <= 1e-6 * (1.0 + std::fabs(fd1)));
            for (int j = i; j < n; ++j) {
              double fd2 = testing::fd_d2(comp(a, b), x, i, j, 1e-4);
              CHECK(std::fabs(m.d2g(i, j, a, b) - fd2) <= 1e-5 * (1.0 + std::fabs(fd2)));
            }
          }
        }
    }
  }
}

TEST_CASE("degenerate sampling bounds are rejected") {
  SpacetimeSpec spec = build_grw(4, "t", FiberSpec::flat(3));
  std::vector<double> bad{0.0, 0.0, 0.0, -1.0};
  CHECK(!point_admissible(spec, bad));
  std::vector<double> good{0.0, 0.0, 0.0, 1.0};
  CHECK(point_admissible(spec, good));
}

TEST_CASE("custom diagonal entries must stay positive") {
  auto fiber = FiberSpec::custom_diagonal({"1", "x1", "1"}, 3, {});
  SpacetimeSpec spec = build_grw(4, "1", std::move(fiber));
  std::vector<double> neg{-0.5, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(validate_point(spec, neg), ValidationError);
  std::vector<double> pos{0.5, 0.0, 0.0, 0.0};
  CHECK_NOTHROW(validate_point(spec, pos));
}
