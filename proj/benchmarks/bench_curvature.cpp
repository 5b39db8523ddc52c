#include <benchmark/benchmark.h>

#include "grw/curvature.hpp"
#include "grw/observer.hpp"
#include "grw/spacetime.hpp"

namespace {

using namespace grw;

SpacetimeSpec wavy_spec() {
  return build_grw(4, "1 + 0.3*sin(t)", FiberSpec::constant_curvature(3, 1.0));
}

const std::vector<double> kPoint{0.2, -0.3, 0.4, 0.7};

void BM_JetEval(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  Expr e = parse_expr("exp(x1)*sin(x2) + (1 + x3^2)*cosh(t)",
                      std::vector<std::string>{"x1", "x2", "x3", "t"});
  for (auto _ : state) {
    Jet j = jet_eval(e, kPoint, order);
    benchmark::DoNotOptimize(j.value());
  }
}
BENCHMARK(BM_JetEval)->DenseRange(0, 3);

void BM_MetricAt(benchmark::State& state) {
  SpacetimeSpec spec = wavy_spec();
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) {
    MetricAtPoint m = metric_at(spec, kPoint, order);
    benchmark::DoNotOptimize(m.det);
  }
}
BENCHMARK(BM_MetricAt)->DenseRange(0, 3);

void BM_CurvaturePack(benchmark::State& state) {
  SpacetimeSpec spec = wavy_spec();
  for (auto _ : state) {
    CurvaturePack pack = curvature_pack(spec, kPoint, true);
    benchmark::DoNotOptimize(pack.scalar);
  }
}
BENCHMARK(BM_CurvaturePack);

void BM_ThirdOrderPack(benchmark::State& state) {
  SpacetimeSpec spec = wavy_spec();
  for (auto _ : state) {
    CurvaturePack pack = third_order_pack(spec, kPoint);
    benchmark::DoNotOptimize(pack.div_weyl.max_abs());
  }
}
BENCHMARK(BM_ThirdOrderPack);

void BM_LemmaResidualsPerPoint(benchmark::State& state) {
  SpacetimeSpec spec = wavy_spec();
  std::vector<Vec> pts;
  Vec p(4);
  for (int i = 0; i < 4; ++i) p(i) = kPoint[i];
  pts.push_back(p);
  for (auto _ : state) {
    LemmaReport rep = verify_lemma1(spec, pts);
    benchmark::DoNotOptimize(rep.max_residual);
  }
}
BENCHMARK(BM_LemmaResidualsPerPoint);

void BM_SecondBianchi(benchmark::State& state) {
  SpacetimeSpec spec = wavy_spec();
  for (auto _ : state) {
    double r = second_bianchi_residual(spec, kPoint);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_SecondBianchi);

}  // namespace

BENCHMARK_MAIN();
