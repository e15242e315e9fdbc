// Serial reference paths against the OpenMP kernels. The second argument of
// each benchmark selects the path: 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include <numeric>
#include <random>

#include "diurnal/activity.hpp"
#include "diurnal/kernels.hpp"
#include "diurnal/stats.hpp"
#include "diurnal/synth.hpp"

using namespace diurnal;
using kernels::Exec;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(1) ? Exec::Parallel : Exec::Serial; }

std::vector<DiurnalCurve> random_curves(std::size_t n) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<DiurnalCurve> out(n);
    for (auto& c : out)
        for (std::size_t b = 0; b < kBins; ++b) c[b] = u(rng);
    return out;
}

const PostTable& corpus() {
    static const PostTable posts = [] {
        const auto spec = synth::chronotype_spec(100, 300, 400);
        return localize(synth::generate(spec, 3).posts, TzRule::parse(spec.tz));
    }();
    return posts;
}

void BM_SquaredDistances(benchmark::State& state) {
    const auto curves = random_curves(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::squared_distances(curves, exec_of(state)));
}

void BM_BestWindows(benchmark::State& state) {
    const auto curves = random_curves(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::best_windows(curves, 64, exec_of(state)));
}

void BM_SmoothedUserCurves(benchmark::State& state) {
    const auto& posts = corpus();
    std::vector<std::size_t> users(posts.user_count());
    std::iota(users.begin(), users.end(), std::size_t{0});
    const auto kernel = gaussian_kernel();
    for (auto _ : state) benchmark::DoNotOptimize(kernels::smoothed_user_curves(posts, users, kernel, exec_of(state)));
}

void BM_DipBootstrap(benchmark::State& state) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    std::vector<double> sample(static_cast<std::size_t>(state.range(0)));
    for (auto& v : sample) v = g(rng);
    for (auto _ : state) benchmark::DoNotOptimize(stats::dip_test(sample, 500, 1, exec_of(state)));
}

}  // namespace

BENCHMARK(BM_SquaredDistances)->ArgsProduct({{300, 900}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BestWindows)->ArgsProduct({{1000, 10000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SmoothedUserCurves)->ArgsProduct({{0}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DipBootstrap)->ArgsProduct({{100, 1000}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
