#include <benchmark/benchmark.h>

#include <memory>

#include "stochelm/field_io.hpp"
#include "stochelm/helmsolve.hpp"
#include "stochelm/ntcheck.hpp"
#include "stochelm/uqdriver.hpp"

using namespace stochelm;

namespace
{

std::shared_ptr<const RandomFieldSpec> spec()
{
  static const auto s = std::make_shared<const RandomFieldSpec>(
      load_field_spec(std::string(STOCHELM_BENCH_CONFIG_DIR) + "/nontrapping_spec.json"));
  return s;
}

SourceField source()
{
  return SourceField::from_primitive(FieldPrimitive{PrimitiveKind::QuarticBump, Vec2(0.2, 0.1), 0.3, 1.0});
}

void BM_BuildMesh(benchmark::State &state)
{
  const double h = 1.0 / state.range(0);
  std::size_t n = 0;
  for (auto _ : state)
  {
    const auto m = build_mesh(1.0, Obstacle::none(), h);
    n = m.num_vertices();
    benchmark::DoNotOptimize(n);
  }
  state.counters["vertices"] = static_cast<double>(n);
}
BENCHMARK(BM_BuildMesh)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_AssembleSolve(benchmark::State &state)
{
  const double h = 1.0 / state.range(0);
  auto mesh = std::make_shared<const Mesh>(build_mesh(1.0, Obstacle::none(), h));
  const auto med = draw_sample(spec(), 0);
  const auto closure = state.range(1) ? BoundaryClosure::dtn_default(5.0, 1.0) : BoundaryClosure::impedance();
  for (auto _ : state)
  {
    const auto r = solve(assemble(mesh, med, 5.0, source(), closure));
    benchmark::DoNotOptimize(r.weighted_norm_sq);
  }
  state.counters["vertices"] = static_cast<double>(mesh->num_vertices());
}
BENCHMARK(BM_AssembleSolve)
    ->Args({20, 0})
    ->Args({40, 0})
    ->Args({20, 1})
    ->Args({40, 1})
    ->Unit(benchmark::kMillisecond);

void BM_DtnSymbol(benchmark::State &state)
{
  const double k = static_cast<double>(state.range(0));
  for (auto _ : state)
  {
    std::complex<double> acc = 0.0;
    for (int m = -64; m <= 64; ++m)
    {
      acc += dtn_symbol(m, k, 1.0);
    }
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_DtnSymbol)->Arg(1)->Arg(10)->Arg(40);

void BM_Certify(benchmark::State &state)
{
  const auto med = draw_sample(spec(), 1);
  const int res = static_cast<int>(state.range(0));
  for (auto _ : state)
  {
    const auto c = certify_nontrapping(med, res);
    benchmark::DoNotOptimize(c.mu1_hat);
  }
}
BENCHMARK(BM_Certify)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_SeriesConditions(benchmark::State &state)
{
  for (auto _ : state)
  {
    const auto r = check_series_conditions(*spec(), 0.1, 128, 1.0, 1.0);
    benchmark::DoNotOptimize(r.pass);
  }
}
BENCHMARK(BM_SeriesConditions)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
