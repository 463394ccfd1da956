#include <benchmark/benchmark.h>

#include <numbers>

#include "sqz/fock.hpp"
#include "sqz/gaussian.hpp"
#include "sqz/homodyne.hpp"
#include "sqz/protocols.hpp"

using namespace sqz;

static void BM_BeamSplitterFock(benchmark::State &state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    const auto in = tensor(squeezed_vacuum_fock(0.5, d), coherent_fock(0.7, d));
    const double h = 1.0 / std::numbers::sqrt2;
    for (auto _ : state) {
        benchmark::DoNotOptimize(beam_splitter_fock(in, {0, 1}, h, h));
    }
}
BENCHMARK(BM_BeamSplitterFock)->Arg(10)->Arg(20)->Arg(40);

static void BM_DisplaceFock(benchmark::State &state) {
    const auto in = squeezed_vacuum_fock(0.5, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(displace_fock(in, 0, {0.4, 0.2}));
    }
}
BENCHMARK(BM_DisplaceFock)->Arg(20)->Arg(40);

static void BM_GaussianPipeline(benchmark::State &state) {
    for (auto _ : state) {
        auto s = two_mode_squeeze(vacuum(2), {0, 1}, 0.8);
        s = beam_splitter(s, {0, 1}, 0.6, 0.8);
        s = loss_channel(s, 0, 0.9);
        benchmark::DoNotOptimize(s.symplectic_eigenvalues());
    }
}
BENCHMARK(BM_GaussianPipeline);

static void BM_ReconstructWigner(benchmark::State &state) {
    const auto data = sample_quadratures(squeeze(vacuum(1), 0, 0.69), 0, uniform_phases(24),
                                         static_cast<std::size_t>(state.range(0)), 1);
    const auto grid = square_grid(4.0, 21);
    for (auto _ : state) {
        benchmark::DoNotOptimize(reconstruct_wigner(data, grid));
    }
}
BENCHMARK(BM_ReconstructWigner)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_WelchSpectrum(benchmark::State &state) {
    const auto trace = white_photocurrent(0.5, 20e6, static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(spectrum(trace, 16));
    }
}
BENCHMARK(BM_WelchSpectrum)->Arg(1 << 14)->Arg(1 << 17)->Unit(benchmark::kMicrosecond);

static void BM_TeleportWignerCheck(benchmark::State &state) {
    const auto in = displace(vacuum(1), 0, {0.5, 0.3});
    for (auto _ : state) {
        benchmark::DoNotOptimize(teleport_wigner_check(in, 1.0, 4.0, 41));
    }
}
BENCHMARK(BM_TeleportWignerCheck)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
