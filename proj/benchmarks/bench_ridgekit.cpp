#include <benchmark/benchmark.h>

#include "ridgekit/dplane.hpp"
#include "ridgekit/euclid.hpp"
#include "ridgekit/fft.hpp"
#include "ridgekit/finite_field.hpp"
#include "ridgekit/numeric.hpp"
#include "ridgekit/parallel.hpp"

using namespace ridgekit;

namespace {

void BM_Dft2D(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    GridFunction f = gaussian_target(2, n, 8.0);
    for (auto _ : state) benchmark::DoNotOptimize(dft(f).values.data());
    state.SetItemsProcessed(state.iterations() * f.size());
}
BENCHMARK(BM_Dft2D)->Arg(64)->Arg(128)->Arg(256);

void BM_FiniteFieldReconstruct(benchmark::State& state) {
    const auto p = static_cast<unsigned>(state.range(0));
    Rng rng(1);
    FpFunction f = fp_random(p, 2, rng);
    FpActivation s = fp_activation("char1", p), r = fp_activation("delta0", p);
    for (auto _ : state) benchmark::DoNotOptimize(fp_reconstruct(f, s, r).residual);
}
BENCHMARK(BM_FiniteFieldReconstruct)->Arg(5)->Arg(11)->Arg(23);

void BM_EuclidRidgelet(benchmark::State& state) {
    GridFunction f = gaussian_target(1, 128, 6.0);
    Mollifier rho = gaussian_mollifier(2);
    const auto na = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(ridgelet(f, rho, ParamGrid(1, na, 6.0, 128, 10.0)).values.data());
}
BENCHMARK(BM_EuclidRidgelet)->Arg(48)->Arg(96);

void BM_EuclidReconstructM1(benchmark::State& state) {
    Activation sigma = make_activation("gauss");
    Mollifier rho = gaussian_mollifier(2);
    for (auto _ : state) benchmark::DoNotOptimize(reconstruct(EuclidGrid{}, sigma, rho).residual);
}
BENCHMARK(BM_EuclidReconstructM1)->Unit(benchmark::kMillisecond);

void BM_DPlaneTransform(benchmark::State& state) {
    const auto m = static_cast<unsigned>(state.range(0));
    const auto k = static_cast<unsigned>(state.range(1));
    GridFunction f = gaussian_probe(m, m == 2 ? 128 : 48, 8.0);
    FrameSet frames = make_frames(m, k, 16, 1);
    for (auto _ : state) benchmark::DoNotOptimize(dplane_transform(f, frames, 64, 8.0).slices.data());
}
BENCHMARK(BM_DPlaneTransform)->Args({2, 1})->Args({3, 1})->Args({3, 2})->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
    set_thread_count(1);
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
