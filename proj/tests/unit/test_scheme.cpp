#include <doctest.h>

#include <random>

#include "eotile/error.hpp"
#include "eotile/scheme.hpp"
#include "oracles.hpp"

using namespace eotile;

TEST_CASE("tile_count_1d worked values")
{
    CHECK(tile_count_1d(6.5, 2.5, 4, Rounding::Floor) == 2);
    CHECK(tile_count_1d(5.5, 3.5, 2, Rounding::Floor) == 2);
    CHECK(tile_count_1d(10, 2, 2, Rounding::Floor) == 5);
    CHECK(tile_count_1d(11, 3, 4, Rounding::Floor) == 3);
    CHECK(tile_count_1d(11, 3, 4, Rounding::Ceil) == 4);
}

TEST_CASE("tile_count_1d degenerate extents")
{
    CHECK(tile_count_1d(3, 1, 4, Rounding::Floor) == 0);
    CHECK(tile_count_1d(3, 1, 4, Rounding::Ceil) == 1);
    CHECK_THROWS_AS(tile_count_1d(0, 1, 1, Rounding::Floor), Error);
    CHECK_THROWS_AS(tile_count_1d(10, -1, 1, Rounding::Floor), Error);
    CHECK_THROWS_AS(tile_count_1d(10, 1, 0, Rounding::Ceil), Error);
}

TEST_CASE("coverage and offset")
{
    CHECK(coverage_1d(6.5, 2.5, 4, Rounding::Floor) == doctest::Approx(6.5));
    CHECK(coverage_1d(11, 3, 4, Rounding::Floor) == doctest::Approx(10));
    CHECK(coverage_1d(11, 3, 4, Rounding::Ceil) == doctest::Approx(13));
    CHECK(offset_1d(6.5, 2.5, 4, Rounding::Floor) == doctest::Approx(0));
    CHECK(offset_1d(11, 3, 4, Rounding::Floor) == doctest::Approx(0.5));
    CHECK(offset_1d(11, 3, 4, Rounding::Ceil) == doctest::Approx(-1));
    CHECK(coverage_1d(3, 1, 4, Rounding::Floor) == 0);
}

TEST_CASE("count matches stepping scan")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> r(1, 500);
    std::uniform_real_distribution<double> st(0.5, 100);
    for (int k = 0; k < 2000; ++k) {
        const double rr = r(rng);
        const double s = st(rng);
        const double t = st(rng);
        for (Rounding ro : {Rounding::Floor, Rounding::Ceil})
            REQUIRE(tile_count_1d(rr, s, t, ro) == testing::scan_tile_count(rr, s, t, ro));
    }
}

TEST_CASE("build_scheme examples")
{
    SchemeSpec spec{{4, 2}, {2.5, 3.5}};
    TilingScheme a = build_scheme({6.5, 5.5}, spec);
    CHECK(a.counts == Count2{2, 2});
    CHECK(a.total() == 4);

    TilingScheme b = build_scheme({10, 10}, SchemeSpec{{10, 10}, {10, 10}, LengthUnit::Pixels, Rounding::Ceil});
    CHECK(b.counts == Count2{1, 1});
    CHECK(b.offset == Vec2{0, 0});

    TilingScheme c = build_scheme({1024, 1024}, SchemeSpec{{256, 256}, {128, 128}});
    CHECK(c.counts == Count2{7, 7});

    TilingScheme empty = build_scheme({100, 100}, SchemeSpec{{256, 256}, {256, 256}});
    CHECK(empty.empty());
    CHECK(enumerate_tiles(empty).empty());

    SchemeSpec metric{{75, 75}, {75, 75}, LengthUnit::Meters};
    CHECK_THROWS_AS(build_scheme({10, 10}, metric), Error);
}

TEST_CASE("enumerate_tiles order, ids and windows")
{
    TilingScheme s = build_scheme({6.5, 5.5}, SchemeSpec{{4, 2}, {2.5, 3.5}});
    auto tiles = enumerate_tiles(s);
    REQUIRE(tiles.size() == 4);
    CHECK(tiles[0].id == "tile_0_0");
    CHECK(tiles[1].id == "tile_1_0");
    CHECK(tiles[2].id == "tile_0_1");
    CHECK(tiles[3].id == "tile_1_1");
    CHECK(tiles[1].origin_px.x == doctest::Approx(2.5));
    CHECK(tiles[1].window == PixelWindow{3, 0, 7, 2});
    CHECK(tiles[3].window.y0 == 4);
}

TEST_CASE("corner anchored lattice")
{
    SchemeSpec spec = SchemeSpec::with_stride_divisor({100, 100}, 1, Rounding::Floor, CornerAnchored{{10, 0}});
    TilingScheme s = build_scheme({320, 100}, spec);
    CHECK(s.counts == Count2{3, 1});
    CHECK(s.offset.x == doctest::Approx(10));

    SchemeSpec ceil = SchemeSpec::with_stride_divisor({100, 100}, 1, Rounding::Ceil, CornerAnchored{{10, 0}});
    TilingScheme c = build_scheme({320, 100}, ceil);
    CHECK(c.counts.x == 5); // -90 .. 310 covers [0, 320]
    CHECK(c.offset.x == doctest::Approx(-90));

    // Raster-center anchoring nests lattices of stride t and t/m.
    const OriginPolicy center = CornerAnchored{{0, 0}, AnchorFrame::RasterCenter};
    TilingScheme base = build_scheme({1000, 1000}, SchemeSpec::with_stride_divisor({128, 128}, 1, Rounding::Floor, center));
    TilingScheme aux = build_scheme({1000, 1000}, SchemeSpec::with_stride_divisor({128, 128}, 4, Rounding::Floor, center));
    const double k = (base.offset.x - aux.offset.x) / 32.0;
    CHECK(k == doctest::Approx(std::round(k)));
    CHECK(base.offset.x == doctest::Approx(500 - 3 * 128));
}

TEST_CASE("symmetric margins")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> r(10, 3000);
    std::uniform_real_distribution<double> t(1, 400);
    for (int k = 0; k < 500; ++k) {
        const double rr = r(rng);
        const double tt = t(rng);
        const double s = tt / std::uniform_int_distribution<int>(1, 5)(rng);
        for (Rounding ro : {Rounding::Floor, Rounding::Ceil}) {
            const double off = offset_1d(rr, s, tt, ro);
            const double right = rr - (off + coverage_1d(rr, s, tt, ro));
            if (tile_count_1d(rr, s, tt, ro) == 0) continue;
            CHECK(off == doctest::Approx(right).epsilon(1e-12));
            if (ro == Rounding::Floor) CHECK(off >= -1e-9);
            else CHECK(off <= 1e-9);
        }
    }
}

TEST_CASE("augmented_count")
{
    CHECK(augmented_count(1024, 256, 2, Rounding::Floor) == 7);
    CHECK(augmented_count(1024, 256, 1, Rounding::Floor) == 4);
    CHECK_THROWS_AS(augmented_count(1024, 256, 0, Rounding::Floor), Error);
    for (int m = 1; m <= 6; ++m) {
        for (Rounding ro : {Rounding::Floor, Rounding::Ceil}) {
            const auto spec = SchemeSpec::with_stride_divisor({256, 256}, m, ro);
            CHECK(build_scheme({1000, 1000}, spec).counts.x == augmented_count(1000, 256, m, ro));
        }
    }
}

TEST_CASE("rounding names")
{
    CHECK(parse_rounding("floor") == Rounding::Floor);
    CHECK(parse_rounding("ceil") == Rounding::Ceil);
    CHECK(to_string(Rounding::Ceil) == "ceil");
    CHECK_THROWS_AS(parse_rounding("round"), Error);
}

TEST_CASE("enumeration refuses absurd tile counts")
{
    const TilingScheme s = build_scheme({3e5, 2e5}, SchemeSpec{{1e-2, 1e-2}, {1e-2, 1e-2}});
    REQUIRE(s.total() > kMaxEnumeratedTiles);
    try {
        (void)enumerate_tiles(s);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidArgument);
    }
}
