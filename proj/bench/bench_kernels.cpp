// Serial reference vs OpenMP kernels on the two hot paths: the translation
// sum (one closed-form expansion per group element) and the series product.

#include "superdenom/denominator.hpp"

#include <benchmark/benchmark.h>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace superdenom;

namespace {

const AlgebraSpec& spec_for(int which) {
  static const AlgebraSpec a = build_spec(Family::A_2km1_2km1, 2, 0);
  static const AlgebraSpec g = build_spec(Family::G3, 0, 0);
  static const AlgebraSpec d = build_spec(Family::D_kp1_k, 2, 0);
  return which == 0 ? a : which == 1 ? g : d;
}

void BM_TranslationSum(benchmark::State& state) {
  const auto& s = spec_for(static_cast<int>(state.range(0)));
  auto w = make_window(s, static_cast<int>(state.range(1)));
  RhsOptions opt;
  opt.exec = state.range(2) ? Exec::Parallel : Exec::Serial;
  std::size_t terms = 0;
  for (auto _ : state) {
    auto r = build_rhs_translation_sum(s, w, opt);
    terms = r.series.size();
    benchmark::DoNotOptimize(terms);
  }
  state.counters["terms"] = static_cast<double>(terms);
  state.SetLabel(s.name() + (opt.exec == Exec::Parallel ? " parallel" : " serial"));
}

void BM_Lhs(benchmark::State& state) {
  const auto& s = spec_for(static_cast<int>(state.range(0)));
  auto w = make_window(s, static_cast<int>(state.range(1)));
  const Exec exec = state.range(2) ? Exec::Parallel : Exec::Serial;
  for (auto _ : state) benchmark::DoNotOptimize(build_lhs(s, w, exec).size());
  state.SetLabel(s.name() + (exec == Exec::Parallel ? " parallel" : " serial"));
}

void BM_Product(benchmark::State& state) {
  const auto& s = spec_for(2);
  auto w = make_window(s, static_cast<int>(state.range(0)));
  auto lhs = build_lhs(s, w);
  auto inv = TruncatedSeries::unit(s.basis, Weight(), w.H);
  for (const auto& f : finite_factors(s)) inv = mul_factor(inv, {f.gamma, f.sign, -f.exponent, f.multiplicity});
  const Exec exec = state.range(1) ? Exec::Parallel : Exec::Serial;
  for (auto _ : state) benchmark::DoNotOptimize(mul(lhs, inv, exec).size());
  state.SetLabel(exec == Exec::Parallel ? "parallel" : "serial");
}

}  // namespace

BENCHMARK(BM_TranslationSum)
    ->ArgsProduct({{0}, {14, 20}, {0, 1}})
    ->ArgsProduct({{1}, {8, 12}, {0, 1}})
    ->ArgsProduct({{2}, {12, 17}, {0, 1}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Lhs)->ArgsProduct({{0, 2}, {17}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Product)->ArgsProduct({{12, 17}, {0, 1}})->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
#ifdef _OPENMP
  benchmark::AddCustomContext("omp_max_threads", std::to_string(omp_get_max_threads()));
#endif
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
