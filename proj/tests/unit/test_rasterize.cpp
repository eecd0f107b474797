#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "eotile/error.hpp"
#include "eotile/rasterize.hpp"

using namespace eotile;

namespace {

RasterMeta meta(std::int64_t w, std::int64_t h, double gsd = 1.0, std::string crs = "EPSG:32633")
{
    RasterMeta m;
    m.extent_px = {w, h};
    m.geotransform = {{gsd, -gsd}, {0, 0}, {0, static_cast<double>(h) * gsd}};
    m.gsd = {gsd, gsd};
    m.crs = std::move(crs);
    m.units = CrsUnits::Meters;
    return m;
}

std::int64_t count(const LabelGrid& g, std::uint8_t v)
{
    std::int64_t n = 0;
    for (auto x : g.data) n += x == v ? 1 : 0;
    return n;
}

} // namespace

TEST_CASE("geojson parsing")
{
    const char* text = R"({"type": "FeatureCollection",
        "crs": {"type": "name", "properties": {"name": "urn:ogc:def:crs:EPSG::32633"}},
        "features": [
          {"type": "Feature", "properties": {"class": 2},
           "geometry": {"type": "Polygon", "coordinates": [[[0,0],[4,0],[4,4],[0,4],[0,0]]]}},
          {"type": "Feature", "properties": {},
           "geometry": {"type": "MultiPolygon", "coordinates": [[[[5,5],[6,5],[6,6],[5,5]]], [[[7,7],[8,7],[8,8],[7,7]]]]}},
          {"type": "Feature", "properties": {}, "geometry": {"type": "Point", "coordinates": [1, 1]}},
          {"type": "Feature", "properties": {}, "geometry": {"type": "Polygon", "coordinates": [[[0,0],[1,0],[1,1]]]}},
          {"type": "Feature", "properties": {"class": 300},
           "geometry": {"type": "Polygon", "coordinates": [[[0,0],[4,0],[4,4],[0,0]]]}}
        ]})";
    const VectorLabelSet s = parse_geojson(text);
    CHECK(s.crs == "EPSG:32633");
    REQUIRE(s.features.size() == 2);
    CHECK(s.features[0].class_id == 2);
    CHECK(s.features[1].class_id == 1);
    CHECK(s.features[1].parts.size() == 2);
    CHECK(s.skipped == 3);
    CHECK_THROWS_AS(parse_geojson(R"({"type": "Feature"})"), ParseError);
    CHECK_THROWS_AS(parse_geojson("[1,"), ParseError);
    CHECK(normalize_crs_name("urn:ogc:def:crs:OGC:1.3:CRS84") == "EPSG:4326");
    CHECK(normalize_crs_name("EPSG:3857") == "EPSG:3857");
}

TEST_CASE("axis-aligned square fills whole pixels")
{
    VectorLabelSet s;
    s.features.push_back({{PolygonPart{{{{2, 2}, {6, 2}, {6, 5}, {2, 5}, {2, 2}}}}}, 1});
    const LabelGrid g = rasterize(s, meta(10, 10));
    CHECK(count(g, 1) == 12);
    // World y grows upwards; row 0 is the top.
    CHECK(g.at(2, 10 - 5) == 1);
    CHECK(g.at(2, 10 - 6) == 0);
    CHECK(g.classes == 2);
}

TEST_CASE("holes, overwrite order and crs mismatch")
{
    VectorLabelSet s;
    PolygonPart donut{{{{0, 0}, {10, 0}, {10, 10}, {0, 10}, {0, 0}}, {{3, 3}, {7, 3}, {7, 7}, {3, 7}, {3, 3}}}};
    s.features.push_back({{donut}, 1});
    s.features.push_back({{PolygonPart{{{{0, 0}, {2, 0}, {2, 2}, {0, 2}, {0, 0}}}}}, 2});
    const LabelGrid g = rasterize(s, meta(10, 10));
    CHECK(count(g, 0) == 16);
    CHECK(count(g, 2) == 4);
    CHECK(count(g, 1) == 100 - 16 - 4);

    s.crs = "EPSG:4326";
    try {
        rasterize(s, meta(10, 10));
        FAIL("expected unsupported crs");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnsupportedCrs);
    }
}

TEST_CASE("convex polygon area within perimeter bound")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 50; ++k) {
        const double gsd = 0.2 + u(rng);
        const RasterMeta m = meta(200, 200, gsd);
        const double R = (10 + 80 * u(rng)) * gsd;
        const Vec2 c{(100 + 10 * (u(rng) - 0.5)) * gsd, (100 + 10 * (u(rng) - 0.5)) * gsd};
        std::vector<double> ang(3 + static_cast<int>(u(rng) * 10));
        for (double& a : ang) a = 2 * std::numbers::pi * u(rng);
        std::sort(ang.begin(), ang.end());
        Ring ring;
        for (double a : ang) ring.push_back({c.x + R * std::cos(a), c.y + R * std::sin(a)});
        ring.push_back(ring.front());
        double area = 0;
        double perim = 0;
        for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
            area += ring[i].x * ring[i + 1].y - ring[i + 1].x * ring[i].y;
            perim += std::hypot(ring[i + 1].x - ring[i].x, ring[i + 1].y - ring[i].y);
        }
        area = std::abs(area) / 2;
        VectorLabelSet s;
        s.features.push_back({{PolygonPart{{ring}}}, 1});
        const double got = static_cast<double>(count(rasterize(s, m), 1)) * gsd * gsd;
        CHECK(std::abs(got - area) <= perim * gsd);
    }
}
