#include <doctest.h>

#include <random>

#include "eotile/error.hpp"
#include "eotile/georef.hpp"

using namespace eotile;

namespace {

const GeoTransform kRaster{{0.1, -0.1}, {0.0, 0.0}, {1000.0, 2000.0}};

RasterMeta meta_of(const GeoTransform& gt, std::int64_t w, std::int64_t h)
{
    RasterMeta m;
    m.extent_px = {w, h};
    m.geotransform = gt;
    m.gsd = gsd_from_transform(gt);
    m.crs = "EPSG:32633";
    m.units = CrsUnits::Meters;
    return m;
}

} // namespace

TEST_CASE("meters to pixels")
{
    CHECK(meters_to_pixels({75, 75}, {0.1, 0.1}).x == doctest::Approx(750));
    CHECK(meters_to_pixels({38, 38}, {0.05, 0.05}).y == doctest::Approx(760));
    const Vec2 px = meters_to_pixels({123.4, 56.7}, {0.3, 0.07});
    const Vec2 back = pixels_to_meters(px, {0.3, 0.07});
    CHECK(back.x == doctest::Approx(123.4).epsilon(1e-12));
    CHECK(back.y == doctest::Approx(56.7).epsilon(1e-12));
    CHECK_THROWS_AS(meters_to_pixels({1, 1}, {0, 1}), Error);
    CHECK_THROWS_AS(pixels_to_meters({1, 1}, {1, -1}), Error);
}

TEST_CASE("tile georeference worked example")
{
    TileRef tile;
    tile.origin_px = {512, 256};
    tile.extent_px = {750, 750};
    const GeoTransform g = tile_georef(kRaster, tile, ModelSpec{512, 512});
    CHECK(g.scale.x == doctest::Approx(0.146484375).epsilon(1e-14));
    CHECK(g.scale.y == doctest::Approx(-0.146484375).epsilon(1e-14));
    CHECK(std::abs(g.origin.x - 1051.2) < 1e-12);
    CHECK(std::abs(g.origin.y - 1974.4) < 1e-12);

    TileRef unit;
    unit.extent_px = {512, 512};
    CHECK(tile_georef(kRaster, unit, ModelSpec{512, 512}) == kRaster);
}

TEST_CASE("window georeference and composition")
{
    const GeoTransform w = window_georef(kRaster, {10, 20, 30, 40});
    CHECK(w.scale == kRaster.scale);
    CHECK(w.origin.x == doctest::Approx(1001));
    CHECK(w.origin.y == doctest::Approx(1998));
    // The tile transform maps local pixels onto the same world points as the
    // raster transform maps raster pixels.
    TileRef tile;
    tile.origin_px = {100.25, 40.5};
    tile.extent_px = {64, 32};
    const GeoTransform g = tile_georef(kRaster, tile, ModelSpec{16, 8});
    const Vec2 a = g.apply({4, 2});
    const Vec2 b = kRaster.apply({100.25 + 4 * 4.0, 40.5 + 2 * 4.0});
    CHECK(a.x == doctest::Approx(b.x));
    CHECK(a.y == doctest::Approx(b.y));
}

TEST_CASE("affine round trip")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> sc(0.1, 10);
    std::uniform_real_distribution<double> sk(-0.1, 0.1);
    std::uniform_real_distribution<double> org(-1e5, 1e5);
    std::uniform_real_distribution<double> px(0, 1e4);
    for (int k = 0; k < 1000; ++k) {
        GeoTransform g{{sc(rng), -sc(rng)}, {0, 0}, {org(rng), org(rng)}};
        g.skew = {sk(rng) * g.scale.x, sk(rng) * g.scale.x};
        const Vec2 p{px(rng), px(rng)};
        const Vec2 q = g.apply_inverse(g.apply(p));
        CHECK(std::hypot(q.x - p.x, q.y - p.y) < 1e-9);
        const GeoTransform id = g.compose(g.inverse());
        CHECK(id.scale.x == doctest::Approx(1));
        CHECK(std::abs(id.skew.x) < 1e-9);
    }
    GeoTransform degenerate{{1, 1}, {1, 1}, {0, 0}};
    CHECK_FALSE(degenerate.invertible());
    CHECK_THROWS_AS(degenerate.apply_inverse({1, 1}), Error);
}

TEST_CASE("coefficients are row-major")
{
    const auto g = GeoTransform::from_coefficients({0.5, 0.01, 100, 0.02, -0.5, 200});
    CHECK(g.scale == Vec2{0.5, -0.5});
    CHECK(g.skew == Vec2{0.01, 0.02});
    CHECK(g.origin == Vec2{100, 200});
    CHECK(g.coefficients() == std::array<double, 6>{0.5, 0.01, 100, 0.02, -0.5, 200});
}

TEST_CASE("metric spec conversion")
{
    SchemeSpec metric{{75, 75}, {37.5, 37.5}, LengthUnit::Meters, Rounding::Floor, CornerAnchored{{5, 5}}};
    const SchemeSpec px = to_pixel_spec(metric, {0.1, 0.1});
    CHECK(px.unit == LengthUnit::Pixels);
    CHECK(px.tile_extent.x == doctest::Approx(750));
    CHECK(px.stride.y == doctest::Approx(375));
    CHECK(std::get<CornerAnchored>(px.origin).offset.x == doctest::Approx(50));
}

TEST_CASE("pixel grid baseline")
{
    const GeoTransform gt{{1, -1}, {0, 0}, {0, 0}};
    CHECK(pixel_grid_tiles(meta_of(gt, 1024, 1024), {256, 256}, false).size() == 16);
    CHECK(pixel_grid_tiles(meta_of(gt, 1000, 1000), {256, 256}, true).size() == 16);
    CHECK(pixel_grid_tiles(meta_of(gt, 1000, 1000), {256, 256}, false).size() == 9);
}

TEST_CASE("crs unit inference")
{
    CHECK(infer_crs_units("EPSG:4326") == CrsUnits::Degrees);
    CHECK(infer_crs_units("EPSG:3857") == CrsUnits::Meters);
    CHECK(infer_crs_units("EPSG:32633") == CrsUnits::Meters);
    CHECK(infer_crs_units("EPSG:25832") == CrsUnits::Meters);
    CHECK(infer_crs_units("user-defined") == CrsUnits::Unknown);
    CHECK(parse_crs_units(to_string(CrsUnits::Degrees)) == CrsUnits::Degrees);
}

TEST_CASE("raster meta validation")
{
    RasterMeta m = meta_of(kRaster, 10, 10);
    CHECK_NOTHROW(m.validate());
    m.gsd = {0, 0.1};
    CHECK_THROWS_AS(m.validate(), Error);
    m = meta_of(kRaster, 0, 10);
    CHECK_THROWS_AS(m.validate(), Error);
    CHECK(m.metric_gsd_known());
    m.units = CrsUnits::Degrees;
    CHECK_FALSE(m.metric_gsd_known());
}
