#include <doctest.h>

#include "eotile/error.hpp"
#include "eotile/geotiff.hpp"
#include "tiff_writer.hpp"

using namespace eotile;
using testing::TiffFixture;

namespace {

TiffFixture georeferenced()
{
    TiffFixture f;
    f.width = 7;
    f.height = 5;
    f.pixel_scale = std::vector<double>{0.1, 0.1, 0.0};
    f.tiepoint = std::vector<double>{0, 0, 0, 1000, 2000, 0};
    f.geo_keys = testing::geo_key_directory({{geo_key::ModelType, 1}, {geo_key::ProjectedCSType, 32633}});
    return f;
}

ErrorCode code_of(const std::vector<std::uint8_t>& bytes)
{
    try {
        parse_geotiff_meta(bytes);
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Io; // sentinel: no error
}

} // namespace

TEST_CASE("scale and tiepoint")
{
    for (bool le : {true, false}) {
        TiffFixture f = georeferenced();
        f.little_endian = le;
        const RasterMeta m = parse_geotiff_meta(testing::encode_tiff(f));
        CHECK(m.extent_px == RasterSize{7, 5});
        CHECK(m.geotransform.scale == Vec2{0.1, -0.1});
        CHECK(m.geotransform.origin == Vec2{1000, 2000});
        CHECK(m.geotransform.skew == Vec2{0, 0});
        CHECK(m.gsd == Vec2{0.1, 0.1});
        CHECK(m.crs == "EPSG:32633");
        CHECK(m.units == CrsUnits::Meters);
    }
}

TEST_CASE("tiepoint at an interior pixel")
{
    TiffFixture f = georeferenced();
    f.tiepoint = std::vector<double>{2, 3, 0, 500, 800, 0};
    f.pixel_scale = std::vector<double>{0.5, 0.25, 0};
    const RasterMeta m = parse_geotiff_meta(testing::encode_tiff(f));
    CHECK(m.geotransform.origin == Vec2{499, 800.75});
    CHECK(m.geotransform.scale == Vec2{0.5, -0.25});
}

TEST_CASE("transformation tag wins")
{
    TiffFixture f = georeferenced();
    f.transformation = std::vector<double>{0.2, 0.01, 0, 300, 0.02, -0.3, 0, 400, 0, 0, 0, 0, 0, 0, 0, 1};
    const RasterMeta m = parse_geotiff_meta(testing::encode_tiff(f));
    CHECK(m.geotransform.scale == Vec2{0.2, -0.3});
    CHECK(m.geotransform.skew == Vec2{0.01, 0.02});
    CHECK(m.geotransform.origin == Vec2{300, 400});
}

TEST_CASE("geographic keys, pixel-is-point and nodata")
{
    TiffFixture f = georeferenced();
    f.geo_keys = testing::geo_key_directory(
        {{geo_key::ModelType, 2}, {geo_key::RasterType, 2}, {geo_key::GeographicType, 4326}});
    f.pixel_scale = std::vector<double>{0.5, 0.5, 0};
    f.nodata = "255";
    const RasterMeta m = parse_geotiff_meta(testing::encode_tiff(f));
    CHECK(m.crs == "EPSG:4326");
    CHECK(m.units == CrsUnits::Degrees);
    CHECK(m.geotransform.origin == Vec2{999.75, 2000.25});
    REQUIRE(m.nodata.has_value());
    CHECK(*m.nodata == 255);
}

TEST_CASE("missing and malformed georeference")
{
    TiffFixture plain;
    CHECK(code_of(testing::encode_tiff(plain)) == ErrorCode::MissingGeoreference);

    TiffFixture zero = georeferenced();
    zero.pixel_scale = std::vector<double>{0, 0, 0};
    CHECK(code_of(testing::encode_tiff(zero)) == ErrorCode::ParseError);

    std::vector<std::uint8_t> bad{'I', 'I', 43, 0, 8, 0, 0, 0};
    CHECK(code_of(bad) == ErrorCode::ParseError);
    std::vector<std::uint8_t> truncated = testing::encode_tiff(georeferenced());
    truncated.resize(truncated.size() / 2);
    CHECK(code_of(truncated) == ErrorCode::ParseError);
    try {
        parse_tiff_image_info(std::vector<std::uint8_t>{'I', 'I', 42, 0, 0xff, 0xff, 0, 0});
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 4);
    }
}

TEST_CASE("pixel decoding layouts")
{
    struct Layout {
        bool le;
        std::uint16_t bits;
        std::uint16_t spp;
        std::uint16_t compression;
        std::uint16_t predictor;
        std::uint32_t rows_per_strip;
        std::uint32_t tile;
    };
    const Layout layouts[] = {
        {true, 8, 1, 1, 1, 0, 0},   {false, 8, 1, 1, 1, 2, 0},  {true, 16, 1, 1, 1, 3, 0},
        {false, 16, 3, 1, 1, 0, 0}, {true, 8, 3, 8, 1, 2, 0},   {true, 8, 1, 8, 2, 0, 0},
        {false, 16, 1, 8, 2, 4, 0}, {true, 8, 1, 1, 1, 0, 16},  {false, 16, 2, 8, 2, 0, 16},
    };
    for (const Layout& l : layouts) {
        TiffFixture f = georeferenced();
        f.width = 37;
        f.height = 21;
        f.little_endian = l.le;
        f.bits = l.bits;
        f.samples_per_pixel = l.spp;
        f.compression = l.compression;
        f.predictor = l.predictor;
        f.rows_per_strip = l.rows_per_strip;
        f.tile_size = l.tile;
        const auto bytes = testing::encode_tiff(f);
        const TiffImageInfo info = parse_tiff_image_info(bytes);
        CHECK(info.little_endian == l.le);
        CHECK(info.tiled == (l.tile > 0));
        const PixelBlock b = decode_tiff_pixels(bytes, info);
        CHECK(b.width == 37);
        CHECK(b.bands == l.spp);
        CHECK(b.format == (l.bits == 16 ? SampleFormat::UInt16 : SampleFormat::UInt8));
        CHECK(b.samples == f.pixel_values());
    }
}

TEST_CASE("unsupported compression")
{
    TiffFixture f = georeferenced();
    auto bytes = testing::encode_tiff(f);
    TiffImageInfo info = parse_tiff_image_info(bytes);
    info.compression = 5;
    CHECK_THROWS_AS(decode_tiff_pixels(bytes, info), ParseError);
}
