#include <benchmark/benchmark.h>

#include <wsym/experiments.hpp>
#include <wsym/generators.hpp>
#include <wsym/moser.hpp>
#include <wsym/tower.hpp>

using namespace wsym;

namespace {

// Counterexample level with n factors of ℝ⁴ × ℝ⁴.
const FormField& counterexample_level(int n) {
  static std::vector<FormField> cache = [] {
    return make_counterexample_tower(4, 10, Vec::Unit(4, 0), compact_spectrum(4)).fields;
  }();
  return cache[static_cast<std::size_t>(n - 1)];
}

}  // namespace

static void BM_FlatExtremes(benchmark::State& state) {
  const FormField& f = counterexample_level(static_cast<int>(state.range(0)));
  const Vec x = Vec::Constant(f.dim(), 0.01);
  const Mat m = f(x);
  for (auto _ : state) benchmark::DoNotOptimize(flat_extremes(f.space(), m));
  state.SetLabel("dim " + std::to_string(f.dim()));
}
BENCHMARK(BM_FlatExtremes)->Arg(1)->Arg(5)->Arg(10);

static void BM_RadialPrimitive(benchmark::State& state) {
  const MoserFamily fam(counterexample_level(static_cast<int>(state.range(0))), Vec::Zero(8 * state.range(0)));
  const Vec x = Vec::Constant(fam.dim(), 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(radial_primitive(fam.omega_bar(), x, fam.rule()));
}
BENCHMARK(BM_RadialPrimitive)->Arg(1)->Arg(5)->Arg(10);

static void BM_MoserField(benchmark::State& state) {
  const MoserFamily fam(make_perturbed_darboux_field(static_cast<int>(state.range(0)), 0.05, 0),
                        Vec::Zero(2 * state.range(0)));
  const Vec x = Vec::Constant(fam.dim(), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(moser_vector_field(fam, 0.5, x));
}
BENCHMARK(BM_MoserField)->Arg(2)->Arg(8)->Arg(32);

static void BM_ValidityRadius(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const MoserFamily fam(counterexample_level(n), Vec::Zero(8 * n));
  for (auto _ : state) benchmark::DoNotOptimize(validity_radius(fam));
}
BENCHMARK(BM_ValidityRadius)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_BlockDecompose(benchmark::State& state) {
  const FormSequence fs =
      make_product_tower(std::vector<SkewForm>(static_cast<std::size_t>(state.range(0)), darboux_constant_form(2)));
  for (auto _ : state) benchmark::DoNotOptimize(block_decompose(fs, 0, fs.tower().depth()));
}
BENCHMARK(BM_BlockDecompose)->Arg(2)->Arg(6);

static void BM_MoserFlowPerturbed(benchmark::State& state) {
  const MoserFamily fam(make_perturbed_darboux_field(2, 0.05, 0), Vec::Zero(4));
  FlowOptions o;
  o.dt = 1e-2;
  for (auto _ : state) benchmark::DoNotOptimize(moser_flow(fam, 0.5, o));
}
BENCHMARK(BM_MoserFlowPerturbed)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
