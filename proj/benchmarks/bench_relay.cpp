// Microbenchmarks for the hot paths: the quartic solver, the two
// split-ratio optimizers, the scalar SINR evaluation, and end-to-end
// Monte Carlo throughput.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "fdrelay/channel_mc.hpp"
#include "fdrelay/ps_schemes.hpp"
#include "fdrelay/quartic.hpp"
#include "fdrelay/relay_model.hpp"

namespace {

fdrelay::system_params bench_params() {
    fdrelay::system_params p;
    p.set_rate(3.0);
    p.noise_power = std::pow(10.0, -3.5);             // 35 dB SNR at unit power
    p.mean_f2 = std::pow(10.0, 3.0) * p.noise_power;  // 30 dB loop INR
    return p;
}

std::vector<fdrelay::channel_realization> bench_channels(std::size_t n) {
    const fdrelay::system_params p = bench_params();
    std::mt19937_64 rng(42);
    std::exponential_distribution<double> unit(1.0);
    std::vector<fdrelay::channel_realization> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back({unit(rng), unit(rng), p.mean_f2 * unit(rng)});
    return out;
}

void bm_quartic_real_roots(benchmark::State& state) {
    const fdrelay::system_params p = bench_params();
    const auto chans = bench_channels(1024);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& ch = chans[i++ & 1023];
        const auto s = fdrelay::compute_link_snrs(p, ch);
        const auto q = fdrelay::q1_coeffs(s.gamma_sr, s.gamma_rd, ch.f2,
                                          p.eh_efficiency);
        benchmark::DoNotOptimize(fdrelay::real_roots(q));
    }
}
BENCHMARK(bm_quartic_real_roots);

void bm_full_csi_rho(benchmark::State& state) {
    const fdrelay::system_params p = bench_params();
    const auto chans = bench_channels(1024);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fdrelay::full_csi_rho(p, chans[i++ & 1023]));
    }
}
BENCHMARK(bm_full_csi_rho);

void bm_partial_csi_rho(benchmark::State& state) {
    const fdrelay::system_params p = bench_params();
    const auto chans = bench_channels(1024);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& ch = chans[i++ & 1023];
        benchmark::DoNotOptimize(fdrelay::partial_csi_rho(p, ch.h2, ch.f2));
    }
}
BENCHMARK(bm_partial_csi_rho);

void bm_esinr_max_gain(benchmark::State& state) {
    const fdrelay::system_params p = bench_params();
    const auto chans = bench_channels(1024);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            fdrelay::esinr_max_gain(p, chans[i++ & 1023], 0.5));
    }
}
BENCHMARK(bm_esinr_max_gain);

void bm_outage_mc(benchmark::State& state) {
    const fdrelay::system_params p = bench_params();
    const auto trials = static_cast<std::uint64_t>(state.range(0));
    fdrelay::rng_spec rng;
    rng.seed = 7;
    const std::vector<fdrelay::scheme_spec> schemes = {
        fdrelay::scheme_spec::full()};
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            fdrelay::outage_mc_multi(p, schemes, trials, rng, 1));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_outage_mc)->Arg(1 << 14);

}  // namespace

BENCHMARK_MAIN();
