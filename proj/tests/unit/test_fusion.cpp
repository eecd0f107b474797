#include <doctest.h>

#include <random>
#include <set>

#include "eotile/error.hpp"
#include "eotile/error_stats.hpp"
#include "eotile/fusion.hpp"
#include "oracles.hpp"

using namespace eotile;

namespace {

const OriginPolicy kCenter = CornerAnchored{{0, 0}, AnchorFrame::RasterCenter};

TilingScheme scheme(Vec2 raster, double t, int m, Rounding ro = Rounding::Floor, OriginPolicy p = kCenter)
{
    return build_scheme(raster, SchemeSpec::with_stride_divisor({t, t}, m, ro, p));
}

PredictionSet truth_crops(const std::vector<TileRef>& tiles, const LabelGrid& truth)
{
    PredictionSet p;
    for (const TileRef& t : tiles) p.emplace(t.id, crop_labels(truth, t));
    return p;
}

ErrorCode code_of(const auto& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Io;
}

} // namespace

TEST_CASE("reliable interval")
{
    CHECK(reliable_interval(128, 128) == Interval{64, 192});
    CHECK(reliable_interval(50, 100).width() == 100);

    const TilingScheme s = build_scheme({1024, 1024}, SchemeSpec::with_stride_divisor({256, 256}, 2, Rounding::Floor,
                                                                                     CornerAnchored{}));
    const ReliableRegion first = reliable_region(s, {0, 0});
    CHECK(first.x.lo == 0);
    CHECK(first.x.hi == 192);
    CHECK(first.window.contains(190, 0));
    const ReliableRegion mid = reliable_region(s, {3, 3});
    CHECK(mid.x == Interval{448, 576});
    CHECK(mid.window == PixelWindow{448, 448, 576, 576});
    const ReliableRegion last = reliable_region(s, {6, 6});
    CHECK(last.x.hi == 1024);

    // Width depends on the stride only.
    const TilingScheme wide = build_scheme({1024, 1024}, SchemeSpec{{384, 384}, {128, 128}});
    CHECK(reliable_region(wide, {2, 2}).x.width() == 128);

    const TilingScheme gaps = build_scheme({100, 100}, SchemeSpec{{10, 10}, {20, 20}});
    CHECK_THROWS_AS(reliable_region(gaps, {0, 0}), Error);
}

TEST_CASE("substitution neighbor count")
{
    CHECK(substitution_neighbor_count(128, 256) == 2);
    CHECK(substitution_neighbor_count(256, 256) == 0);
    CHECK(substitution_neighbor_count(64, 256) == 4);
    CHECK(substitution_neighbor_count_2d({128, 128}, {256, 256}) == 8);
    CHECK(substitution_neighbor_count_2d({64, 64}, {256, 256}) == 24);
    CHECK_THROWS_AS(substitution_neighbor_count(0, 256), Error);
}

TEST_CASE("m = 1 plan is the identity")
{
    const TilingScheme base = scheme({300, 200}, 50, 1);
    const FusionPlan plan = plan_fusion(base, base);
    for (const BaseTilePlan& bp : plan.tiles) {
        REQUIRE(bp.donors.size() == 1);
        CHECK(bp.donors[0].donor.id == bp.base.id);
        CHECK(bp.donors[0].destination == bp.base.window);
    }
}

TEST_CASE("partition and donor count per interior tile")
{
    for (int m = 2; m <= 6; ++m) {
        const TilingScheme aux = scheme({1200, 1200}, 120, m);
        const FusionPlan plan = plan_fusion(base_scheme_for(aux), aux);
        const std::int64_t expected =
            substitution_neighbor_count_2d(aux.spec.stride, aux.spec.tile_extent) + 1;
        for (const BaseTilePlan& bp : plan.tiles) {
            std::int64_t area = 0;
            for (std::size_t a = 0; a < bp.donors.size(); ++a) {
                area += bp.donors[a].destination.area();
                for (std::size_t b = a + 1; b < bp.donors.size(); ++b)
                    CHECK(bp.donors[a].destination.intersect(bp.donors[b].destination).empty());
            }
            CHECK(area == bp.destination.area());
            const bool interior = bp.base.index.i > 0 && bp.base.index.j > 0 &&
                                  bp.base.index.i + 1 < plan.base.counts.x && bp.base.index.j + 1 < plan.base.counts.y;
            if (interior) CHECK(static_cast<std::int64_t>(bp.donors.size()) == expected);
        }
    }
}

TEST_CASE("misaligned schemes")
{
    const TilingScheme base = scheme({300, 300}, 60, 1);
    const TilingScheme shifted = build_scheme({300, 300}, SchemeSpec::with_stride_divisor({60, 60}, 2, Rounding::Floor,
                                                                                          CornerAnchored{{7, 0}}));
    CHECK(code_of([&] { plan_fusion(base, shifted); }) == ErrorCode::AlignmentError);
    const TilingScheme odd = build_scheme({300, 300}, SchemeSpec{{60, 60}, {25, 25}, LengthUnit::Pixels,
                                                                Rounding::Floor, kCenter});
    CHECK(code_of([&] { plan_fusion(base, odd); }) == ErrorCode::AlignmentError);
    const TilingScheme other = scheme({300, 300}, 50, 2);
    CHECK(code_of([&] { plan_fusion(base, other); }) == ErrorCode::AlignmentError);
}

TEST_CASE("fuse equals nearest-center oracle")
{
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        const Vec2 raster{static_cast<double>(std::uniform_int_distribution<int>(16, 64)(rng)),
                          static_cast<double>(std::uniform_int_distribution<int>(16, 64)(rng))};
        const double t = std::uniform_int_distribution<int>(4, 16)(rng);
        const int m = std::uniform_int_distribution<int>(1, 4)(rng);
        const Rounding ro = trial % 2 ? Rounding::Ceil : Rounding::Floor;
        const TilingScheme aux = scheme(raster, t, m, ro);
        const FusionPlan plan = plan_fusion(base_scheme_for(aux), aux);
        const std::optional<ModelSpec> model =
            trial % 3 == 0 ? std::optional(ModelSpec{7, 7}) : std::nullopt;
        PredictionSet preds;
        for (const TileRef& tile : plan.aux_tiles) {
            const std::int64_t w = model ? model->width : tile.window.width();
            const std::int64_t h = model ? model->height : tile.window.height();
            preds.emplace(tile.id, testing::random_labels(w, h, 5, rng));
        }
        std::vector<PixelWindow> windows;
        for (const BaseTilePlan& bp : plan.tiles) windows.push_back(bp.base.window);
        const auto w = static_cast<std::int64_t>(raster.x);
        const auto h = static_cast<std::int64_t>(raster.y);
        const LabelGrid expected = testing::nearest_center_fuse(plan.aux_tiles, windows, w, h, preds, model);
        FuseOptions fo;
        fo.model = model;
        fo.threads = trial % 2 ? 3 : 1;
        CHECK(fuse(plan, preds, fo).data == expected.data);
    }
}

TEST_CASE("identity predictions reproduce the truth")
{
    std::mt19937_64 rng(1);
    const LabelGrid truth = testing::random_labels(90, 70, 4, rng);
    const TilingScheme aux = scheme({90, 70}, 20, 2, Rounding::Ceil);
    const FusionPlan plan = plan_fusion(base_scheme_for(aux), aux);
    const LabelGrid fused = fuse(plan, truth_crops(plan.aux_tiles, truth));
    CHECK(fused.data == truth.data);
}

TEST_CASE("fuse errors")
{
    const TilingScheme aux = scheme({40, 40}, 10, 2);
    const FusionPlan plan = plan_fusion(base_scheme_for(aux), aux);
    PredictionSet preds;
    CHECK(code_of([&] { fuse(plan, preds); }) == ErrorCode::MissingTile);
    for (const TileRef& t : plan.aux_tiles) preds.emplace(t.id, LabelGrid(10, 10, 2, 0));
    CHECK_NOTHROW(fuse(plan, preds));
    preds.begin()->second = LabelGrid(9, 10, 2, 0);
    CHECK(code_of([&] { fuse(plan, preds); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("local index mapping")
{
    CHECK(local_index(10, 5.0, 5, 20, std::nullopt) == 5);
    CHECK(local_index(5, 5.0, 5, 20, std::int64_t{10}) == 0);
    CHECK(local_index(6, 5.0, 5, 20, std::int64_t{10}) == 0);
    CHECK(local_index(7, 5.0, 5, 20, std::int64_t{10}) == 1);
    CHECK(local_index(24, 5.0, 5, 20, std::int64_t{10}) == 9);
    CHECK(local_index(30, 5.0, 5, 20, std::int64_t{10}) == 9);
}
