#include <benchmark/benchmark.h>

#include <random>

#include "cansys/cansys.hpp"

using namespace cansys;

namespace {

HamburgerSpec random_hamburger(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> len(0.05, 1.0);
    std::uniform_real_distribution<double> ang(-3.0, 3.0);
    HamburgerSpec s;
    for (std::size_t j = 0; j < n; ++j) {
        s.lengths.push_back(len(rng));
        s.angles.push_back(ang(rng));
    }
    return s;
}

void BM_MonodromyHamburger(benchmark::State& state) {
    const HamburgerSpec s = random_hamburger(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(monodromy_at(s, cplx(30.0, 40.0)).log_norm);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonodromyHamburger)->Arg(10)->Arg(100)->Arg(1000)->Arg(10000);

void BM_MonodromyHolder(benchmark::State& state) {
    AngleProfile p;
    p.phi = PhiForm::holder(1.0, 0.5);
    const double r = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(monodromy_at(p, cplx(0.0, r)).log_norm);
    }
}
BENCHMARK(BM_MonodromyHolder)->Arg(100)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_MaxModulus(benchmark::State& state) {
    const HamburgerSpec s = random_hamburger(static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(max_modulus(s, 100.0));
    }
}
BENCHMARK(BM_MaxModulus)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Recipe(benchmark::State& state) {
    AngleProfile p;
    p.phi = PhiForm::holder(1.0, 0.5);
    const Modulus w = Modulus::power(0.5);
    const double r = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(thm14_recipe(p, r, w).value.A1);
    }
}
BENCHMARK(BM_Recipe)->Arg(1000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_LowerBound(benchmark::State& state) {
    const HamburgerSpec s = random_hamburger(static_cast<std::size_t>(state.range(0)), 3);
    const LogSeries f = f_series(s, s.size());
    for (auto _ : state) {
        benchmark::DoNotOptimize(lower_bound_at(f, 1e4).value);
    }
}
BENCHMARK(BM_LowerBound)->Arg(1000)->Arg(10000);

void BM_ZerosW22(benchmark::State& state) {
    const HamburgerSpec s = random_hamburger(static_cast<std::size_t>(state.range(0)), 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(zeros_w22(s, 100.0).zeros.size());
    }
}
BENCHMARK(BM_ZerosW22)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Lemma5(benchmark::State& state) {
    double a = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lemma5_norms(a, 0.4, 1.3, 0.7).cross_norm);
    }
}
BENCHMARK(BM_Lemma5);

}  // namespace

BENCHMARK_MAIN();
