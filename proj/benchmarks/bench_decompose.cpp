#include <benchmark/benchmark.h>

#include <random>

#include "ssakit/session.hpp"

namespace {

ssa::TimeSeries noise(std::size_t n) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> d;
    std::vector<double> x(n);
    for (auto& v : x) v = d(rng);
    return ssa::TimeSeries(std::move(x));
}

// Fixed N, varying L: the Lanczos cost should stay flat.
void BM_lanczos_window(benchmark::State& state) {
    const auto x = noise(20000);
    ssa::SessionOptions o;
    o.L = std::size_t(state.range(0));
    o.method = ssa::SvdMethod::lanczos;
    o.neig = 20;
    for (auto _ : state) {
        ssa::Session s(x, o);
        benchmark::DoNotOptimize(s.lambda(0));
    }
}
BENCHMARK(BM_lanczos_window)->Arg(1000)->Arg(5000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_eigen_window(benchmark::State& state) {
    const auto x = noise(std::size_t(state.range(0)));
    ssa::SessionOptions o;
    o.method = ssa::SvdMethod::eigen;
    for (auto _ : state) {
        ssa::Session s(x, o);
        benchmark::DoNotOptimize(s.lambda(0));
    }
}
BENCHMARK(BM_eigen_window)->Arg(200)->Arg(400)->Arg(800)->Unit(benchmark::kMillisecond);

}  // namespace
