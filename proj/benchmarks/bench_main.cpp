#include <benchmark/benchmark.h>

#include "flowgen/analysis.hpp"
#include "flowgen/augment.hpp"
#include "flowgen/config.hpp"
#include "flowgen/degrade.hpp"
#include "flowgen/io.hpp"
#include "flowgen/pipeline.hpp"
#include "flowgen/raster.hpp"
#include "flowgen/rng.hpp"
#include "flowgen/scene.hpp"
#include "flowgen/textures.hpp"

using namespace flowgen;

namespace {

GenConfig bench_config() {
  GenConfig c;
  c.min_objects = 16;
  c.max_objects = 16;
  c.seed = 1;
  return c;
}

void BM_SampleScene(benchmark::State& state) {
  const GenConfig c = bench_config();
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_scene(c, i++));
}
BENCHMARK(BM_SampleScene)->Unit(benchmark::kMillisecond);

void BM_RenderPair(benchmark::State& state) {
  GenConfig c = bench_config();
  const int ss = static_cast<int>(state.range(0));
  const SceneSpec scene = sample_scene(c, 0);
  for (auto _ : state) benchmark::DoNotOptimize(render_pair(scene, ss));
}
BENCHMARK(BM_RenderPair)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_GenerateSample(benchmark::State& state) {
  const GenConfig c = bench_config();
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(generate_sample(c, i++));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_GenerateSample)->Unit(benchmark::kMillisecond);

void BM_Clouds(benchmark::State& state) {
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(gen_clouds(512, 512, 6, rng));
}
BENCHMARK(BM_Clouds)->Unit(benchmark::kMillisecond);

void BM_Plasma(benchmark::State& state) {
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(gen_plasma(512, 512, rng));
}
BENCHMARK(BM_Plasma)->Unit(benchmark::kMillisecond);

void BM_BayerCycle(benchmark::State& state) {
  const Sample s = generate_sample(bench_config(), 0);
  for (auto _ : state) benchmark::DoNotOptimize(bayer_cycle(s.frame1, BayerPattern::RGGB));
}
BENCHMARK(BM_BayerCycle)->Unit(benchmark::kMillisecond);

void BM_ApplyGeom(benchmark::State& state) {
  GenConfig c = bench_config();
  const Sample s = generate_sample(c, 0);
  Rng rng(4);
  GeomAugment g;
  g.shared = draw_geom(c.augment_ranges, c.width, c.height, rng);
  g.incremental = draw_geom_delta(c.augment_ranges, c.width, c.height, rng);
  for (auto _ : state) benchmark::DoNotOptimize(apply_geom(s.frame1, s.frame2, s.flow, g));
}
BENCHMARK(BM_ApplyGeom)->Unit(benchmark::kMillisecond);

void BM_EncodeFlo(benchmark::State& state) {
  const Sample s = generate_sample(bench_config(), 0);
  for (auto _ : state) benchmark::DoNotOptimize(encode_flo(s.flow));
}
BENCHMARK(BM_EncodeFlo);

void BM_Epe(benchmark::State& state) {
  const Sample a = generate_sample(bench_config(), 0);
  const Sample b = generate_sample(bench_config(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(epe(a.flow, b.flow));
}
BENCHMARK(BM_Epe);

}  // namespace

BENCHMARK_MAIN();
