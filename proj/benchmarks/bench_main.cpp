#include <benchmark/benchmark.h>

#include <random>

#include "eotile/fusion.hpp"
#include "eotile/scheme.hpp"
#include "eotile/spatial_index.hpp"

using namespace eotile;

namespace {

TilingScheme square_scheme(double raster, double tile, int m)
{
    const OriginPolicy center = CornerAnchored{{0, 0}, AnchorFrame::RasterCenter};
    return build_scheme({raster, raster}, SchemeSpec::with_stride_divisor({tile, tile}, m, Rounding::Floor, center));
}

void BM_EnumerateTiles(benchmark::State& state)
{
    const TilingScheme s = square_scheme(static_cast<double>(state.range(0)), 64, 2);
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_tiles(s));
    state.SetItemsProcessed(state.iterations() * s.total());
}
BENCHMARK(BM_EnumerateTiles)->Arg(1024)->Arg(4096)->Arg(16384);

void BM_TileCount(benchmark::State& state)
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(1, 2000);
    double r = u(rng), s = u(rng), t = u(rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(tile_count_1d(r, s, t, Rounding::Floor));
        r += 0.5;
        if (r > 4000) r = 1;
    }
}
BENCHMARK(BM_TileCount);

std::vector<RealRect> query_windows(const std::vector<TileRef>& tiles, std::size_t n)
{
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<std::size_t> pick(0, tiles.size() - 1);
    std::vector<RealRect> out;
    for (std::size_t k = 0; k < n; ++k) out.push_back(window_rect(tiles[pick(rng)]));
    return out;
}

void BM_IndexQuery(benchmark::State& state)
{
    const auto tiles = enumerate_tiles(square_scheme(static_cast<double>(state.range(0)), 64, 2));
    const SpatialIndex index = SpatialIndex::from_tiles(tiles);
    const auto queries = query_windows(tiles, 1024);
    std::size_t k = 0;
    for (auto _ : state) benchmark::DoNotOptimize(index.query(queries[k++ % queries.size()]));
    state.counters["tiles"] = static_cast<double>(tiles.size());
}
BENCHMARK(BM_IndexQuery)->Arg(1024)->Arg(3232)->Arg(6464);

void BM_NaiveQuery(benchmark::State& state)
{
    const auto tiles = enumerate_tiles(square_scheme(static_cast<double>(state.range(0)), 64, 2));
    std::vector<RealRect> rects;
    for (const TileRef& t : tiles) rects.push_back(window_rect(t));
    const auto queries = query_windows(tiles, 1024);
    std::size_t k = 0;
    for (auto _ : state) benchmark::DoNotOptimize(naive_overlaps(rects, queries[k++ % queries.size()]));
    state.counters["tiles"] = static_cast<double>(tiles.size());
}
BENCHMARK(BM_NaiveQuery)->Arg(1024)->Arg(3232)->Arg(6464);

void BM_PlanFusion(benchmark::State& state)
{
    const TilingScheme aux = square_scheme(4096, 256, static_cast<int>(state.range(0)));
    const TilingScheme base = base_scheme_for(aux);
    for (auto _ : state) benchmark::DoNotOptimize(plan_fusion(base, aux));
}
BENCHMARK(BM_PlanFusion)->DenseRange(1, 4);

void BM_Fuse(benchmark::State& state)
{
    const TilingScheme aux = square_scheme(2048, 256, 2);
    const FusionPlan plan = plan_fusion(base_scheme_for(aux), aux);
    PredictionSet preds;
    for (const TileRef& t : plan.aux_tiles) {
        preds.emplace(t.id, LabelGrid(t.window.width(), t.window.height(), 2, 1));
    }
    FuseOptions opts;
    opts.threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(fuse(plan, preds, opts));
    state.SetBytesProcessed(state.iterations() * 2048 * 2048);
}
BENCHMARK(BM_Fuse)->Arg(1)->Arg(2)->UseRealTime();

} // namespace
BENCHMARK_MAIN();
