#include <benchmark/benchmark.h>

#include <random>

#include "ssakit/hankel.hpp"

namespace {

std::vector<double> noise(std::size_t n) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> d;
    std::vector<double> x(n);
    for (auto& v : x) v = d(rng);
    return x;
}

void BM_hmatvec(benchmark::State& state) {
    const auto N = std::size_t(state.range(0));
    const auto x = noise(N);
    const ssa::HankelOperator op(x, N / 2);
    const Eigen::VectorXd v = Eigen::VectorXd::Ones(Eigen::Index(op.cols()));
    for (auto _ : state) benchmark::DoNotOptimize(ssa::hmatvec(op, v));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_hmatvec)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity(benchmark::oNLogN);

void BM_dense_matvec(benchmark::State& state) {
    const auto N = std::size_t(state.range(0));
    const auto X = ssa::trajectory_matrix(noise(N), N / 2);
    const Eigen::VectorXd v = Eigen::VectorXd::Ones(X.cols());
    for (auto _ : state) benchmark::DoNotOptimize(Eigen::VectorXd(X * v));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_dense_matvec)->RangeMultiplier(4)->Range(1 << 8, 1 << 12)->Complexity(benchmark::oNSquared);

void BM_hankelize_rank1(benchmark::State& state) {
    const auto N = std::size_t(state.range(0));
    const ssa::HankelOperator op(noise(N), N / 2);
    const Eigen::VectorXd u = Eigen::VectorXd::Ones(Eigen::Index(op.rows()));
    const Eigen::VectorXd v = Eigen::VectorXd::Ones(Eigen::Index(op.cols()));
    for (auto _ : state) benchmark::DoNotOptimize(op.hankelize_rank1(u, v));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_hankelize_rank1)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity(benchmark::oNLogN);

}  // namespace
