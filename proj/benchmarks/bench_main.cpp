#include <benchmark/benchmark.h>

#include "cxhess/barrier.hpp"
#include "cxhess/hessian_core.hpp"
#include "cxhess/modulus.hpp"
#include "cxhess/radial.hpp"
#include "cxhess/random.hpp"

using namespace cxhess;

static void BM_ElementarySymmetric(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    SplitMix64 rng(1);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = rng.uniform(-1, 2);
    const core::EigenVector lambda(v);
    for (auto _ : state) benchmark::DoNotOptimize(core::elementary_symmetric(lambda, n / 2));
}
BENCHMARK(BM_ElementarySymmetric)->Arg(4)->Arg(16)->Arg(64);

static void BM_PolarizedForm(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    SplitMix64 rng(2);
    std::vector<core::HermitianForm> forms;
    for (int i = 0; i < m; ++i) forms.push_back(core::random_positive_form(6, rng));
    for (auto _ : state) benchmark::DoNotOptimize(core::polarized_form(forms));
}
BENCHMARK(BM_PolarizedForm)->DenseRange(2, 6, 2);

static void BM_ConcaveMajorant(benchmark::State& state) {
    SplitMix64 rng(3);
    std::vector<modulus::Knot> k{{0, 0}};
    double w = 0;
    for (int i = 1; i <= state.range(0); ++i) {
        w += rng.uniform();
        k.push_back({double(i), w});
    }
    const modulus::ModulusCurve c(k);
    for (auto _ : state) benchmark::DoNotOptimize(modulus::concave_majorant(c));
}
BENCHMARK(BM_ConcaveMajorant)->Arg(200)->Arg(4000);

static void BM_RadialSolve(benchmark::State& state) {
    radial::RadialProblem pb;
    pb.n = 3;
    pb.m = 2;
    pb.density = state.range(1) == 0 ? radial::Density::power(1.5) : radial::Density::log_example(2.0);
    for (auto _ : state) benchmark::DoNotOptimize(radial::radial_solve(pb, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_RadialSolve)->Args({2000, 0})->Args({2000, 1})->Unit(benchmark::kMillisecond);

static void BM_EnvelopeEvaluate(benchmark::State& state) {
    const auto ball = geometry::Domain::ball(2);
    const auto v = barrier::build_subsolution(barrier::named_boundary_data("re_z1", ball), barrier::parse_source("zero"),
                                              ball, 2, static_cast<std::size_t>(state.range(0)), 42);
    const auto pts = geometry::sample_interior(ball, 256, 7);
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(v(pts[i++ % pts.size()]));
}
BENCHMARK(BM_EnvelopeEvaluate)->Arg(100)->Arg(500);

BENCHMARK_MAIN();
