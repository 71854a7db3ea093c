#include <benchmark/benchmark.h>

#include "allostery/atoms.hpp"
#include "allostery/criterion.hpp"
#include "allostery/dynamics.hpp"

using namespace allostery;

namespace {

const Ranks r11{1, 1};

WreathElement at_origin(long v) { return WreathElement::lamp_at_origin(r11, {Integer(v)}); }
WreathElement shift(long s) { return WreathElement::pure_shift(r11, BaseElement({Integer(s)})); }

WindowSystem stage(int levels) {
  std::vector<SubgroupDatum> data{forge(at_origin(1), 2, Rational(1, 2)), forge(shift(1), 3, Rational(1, 2)),
                                  forge(shift(-1), 5, Rational(1, 2)), forge(at_origin(-1), 7, Rational(1, 2))};
  data.resize(static_cast<std::size_t>(levels));
  return WindowSystem::make(std::move(data), r11);
}

void BM_LevelAct(benchmark::State& state) {
  FiniteLevelSystem level(forge(at_origin(1), 2, Rational(1, 16)));
  const auto x = at_origin(1) * shift(3) * at_origin(-1);
  CosetState s = level.identity_state();
  for (auto _ : state) {
    s = level.act(x, s);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_LevelAct);

void BM_WindowApplyGenerator(benchmark::State& state) {
  auto w = stage(3);
  std::uint64_t s = 0;
  w.apply_generator(0, 0, kDefaultStateBudget);
  for (auto _ : state) {
    for (std::size_t g = 0; g < w.generators().size(); ++g) s = w.apply_generator(g, s, kDefaultStateBudget);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_WindowApplyGenerator);

void BM_OrbitBFS(benchmark::State& state) {
  auto w = stage(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(orbit(w, 0, 10'000'000).size());
  state.counters["states"] = static_cast<double>(w.size().convert_to<std::uint64_t>());
}
BENCHMARK(BM_OrbitBFS)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_BooleanAtoms(benchmark::State& state) {
  auto w = stage(2);
  StateSet a;
  for (std::uint64_t s = 0; s < 288; s += 7) a.push_back(s);
  const std::vector<StateSet> sets{a};
  for (auto _ : state) benchmark::DoNotOptimize(boolean_atoms(sets, w, 10'000).blocks.size());
}
BENCHMARK(BM_BooleanAtoms)->Unit(benchmark::kMicrosecond);

void BM_FixedFractionClosedForm(benchmark::State& state) {
  auto w = stage(4);
  for (auto _ : state) benchmark::DoNotOptimize(s_fixed_fraction(w));
}
BENCHMARK(BM_FixedFractionClosedForm);

}  // namespace

BENCHMARK_MAIN();
