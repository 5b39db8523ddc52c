#pragma once

// Shared fixture family for property tests: a spread of warp functions and
// fiber kinds, with seeded admissible-point sampling.

#include <random>
#include <string>
#include <vector>

#include "grw/spacetime.hpp"

namespace grw::testing {

struct Fixture {
  std::string name;
  SpacetimeSpec spec;
  std::vector<std::pair<double, double>> bounds;  // coordinate order, time last
};

inline double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline Fixture make_fixture(const std::string& name) {
  auto bounds_spatial = [](int n, double lo, double hi, double tlo, double thi) {
    std::vector<std::pair<double, double>> b(n - 1, {lo, hi});
    b.emplace_back(tlo, thi);
    return b;
  };
  if (name == "minkowski")
    return {name, build_grw(4, "1", FiberSpec::flat(3)), bounds_spatial(4, -1, 1, -1, 1)};
  if (name == "desitter")
    return {name, build_grw(4, "exp(H*t)", FiberSpec::flat(3), {{"H", 1.0}}),
            bounds_spatial(4, -1, 1, -0.5, 0.5)};
  if (name == "flrw_dust")
    return {name, build_grw(4, "t^(2/3)", FiberSpec::flat(3)), bounds_spatial(4, -1, 1, 0.5, 2.0)};
  if (name == "flrw_radiation")
    return {name, build_grw(4, "t^(1/2)", FiberSpec::flat(3)), bounds_spatial(4, -1, 1, 0.5, 2.0)};
  if (name == "closed_rw")
    return {name, build_grw(4, "1 + 0.25*t^2", FiberSpec::constant_curvature(3, 1.0)),
            bounds_spatial(4, -0.8, 0.8, -1.0, 1.0)};
  if (name == "open_rw")
    return {name, build_grw(4, "2 + cos(t)", FiberSpec::constant_curvature(3, -1.0)),
            bounds_spatial(4, -0.8, 0.8, -1.0, 1.0)};
  if (name == "anisotropic_fiber") {
    auto fiber = FiberSpec::custom_diagonal({"1", "1 + x1^2", "1"}, 3, {});
    return {name, build_grw(4, "1 + 0.1*t^2", std::move(fiber)),
            bounds_spatial(4, -1, 1, -1, 1)};
  }
  if (name == "wavy")
    return {name, build_grw(4, "1 + 0.3*sin(t)", FiberSpec::flat(3)),
            bounds_spatial(4, -1, 1, -1.0, 1.0)};
  if (name == "exp_shift")
    return {name, build_grw(4, "exp(0.5*t) + 1", FiberSpec::flat(3)),
            bounds_spatial(4, -1, 1, -1.0, 1.0)};
  if (name == "quadratic_warp_5d")
    return {name, build_grw(5, "1 + t^2", FiberSpec::constant_curvature(4, 0.7)),
            bounds_spatial(5, -0.8, 0.8, -1.0, 1.0)};
  throw std::runtime_error("unknown fixture " + name);
}

inline std::vector<std::string> default_fixture_names() {
  return {"minkowski", "desitter",   "flrw_dust", "flrw_radiation", "closed_rw",
          "open_rw",   "anisotropic_fiber", "wavy", "exp_shift", "quadratic_warp_5d"};
}

inline std::vector<Vec> sample_admissible(const Fixture& fx, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Vec> pts;
  int guard = 0;
  const int n = fx.spec.n;
  while (static_cast<int>(pts.size()) < count && guard < 100 * count) {
    ++guard;
    Vec p(n);
    for (int i = 0; i < n; ++i) {
      auto [lo, hi] = fx.bounds[i];
      p(i) = lo + (hi - lo) * unit_draw(rng);
    }
    if (point_admissible(fx.spec, p.data())) pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace grw::testing
