#include <benchmark/benchmark.h>

#include "urbanmp/raytrace.hpp"
#include "urbanmp/simulate.hpp"

using namespace urbanmp;

namespace {

ScenarioConfig bench_config()
{
    ScenarioConfig c;
    c.repetitions = 1;
    return c;
}

template <EnvironmentRun (*Run)(const ScenarioConfig&, const CanyonGeometry&)>
void environment(benchmark::State& state)
{
    const auto config = bench_config();
    const auto geometry = generate_canyon(environment_canyon(config, static_cast<double>(state.range(0))));
    std::size_t observations = 0;
    for (auto _ : state) {
        const auto run = Run(config, geometry);
        observations = run.observations.size();
        benchmark::DoNotOptimize(observations);
    }
    state.counters["epochs/s"] =
        benchmark::Counter(static_cast<double>(config.samples_per_repetition()), benchmark::Counter::kIsIterationInvariantRate);
    state.counters["observations"] = static_cast<double>(observations);
}

void segment_occlusion(benchmark::State& state)
{
    CanyonParams p;
    p.rice_nu = 40.0;
    const auto geometry = generate_canyon(p);
    const Vec3 antenna{-140.0, -60.0, 1.51};
    const Vec3 far{1e7, 4e6, 1.2e7};
    for (auto _ : state) {
        benchmark::DoNotOptimize(segment_occluded(antenna, far, geometry));
    }
}

} // namespace

BENCHMARK(environment<run_environment_serial>)->Name("environment/serial")->Arg(5)->Arg(60)->Unit(benchmark::kMillisecond);
BENCHMARK(environment<run_environment>)->Name("environment/openmp")->Arg(5)->Arg(60)->Unit(benchmark::kMillisecond);
BENCHMARK(segment_occlusion);

BENCHMARK_MAIN();
