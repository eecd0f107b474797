#include "eotile/mercator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "eotile/error.hpp"

namespace eotile {

namespace {

constexpr double kEdgeSnap = 1e-9;

double deg2rad(double d) { return d * std::numbers::pi / 180.0; }
double rad2deg(double r) { return r * 180.0 / std::numbers::pi; }

void check_zoom(int zoom)
{
    if (zoom < 0 || zoom > kMercatorMaxZoom)
        throw_invalid("zoom must be in [0, " + std::to_string(kMercatorMaxZoom) + "], got " + std::to_string(zoom));
}

void check_latitude(double lat)
{
    if (!std::isfinite(lat) || std::abs(lat) >= kMercatorMaxLatitude)
        throw_invalid("latitude " + std::to_string(lat) + " is outside the web mercator domain");
}

enum class Frame { LonLat, Mercator };

Frame frame_for(const RasterMeta& raster)
{
    if (raster.crs == "EPSG:4326") return Frame::LonLat;
    if (raster.crs == "EPSG:3857" || raster.crs == "EPSG:900913") return Frame::Mercator;
    throw Error(ErrorCode::UnsupportedCrs, "mercator tiling needs EPSG:4326 or EPSG:3857 bounds, raster CRS is '" +
                                               raster.crs + "'");
}

Vec2 to_tile_space(Vec2 world, Frame frame, int zoom)
{
    const Vec2 lonlat = frame == Frame::LonLat ? world : mercator_to_lonlat(world);
    return lonlat_to_tile(lonlat, zoom);
}

Vec2 from_tile_space(Vec2 tile, Frame frame, int zoom)
{
    const double n = std::ldexp(1.0, zoom);
    const Vec2 merc{tile.x / n * kEquatorialCircumference - kMercatorHalfExtent,
                    kMercatorHalfExtent - tile.y / n * kEquatorialCircumference};
    return frame == Frame::Mercator ? merc : mercator_to_lonlat(merc);
}

double snap_edge(double v)
{
    const double r = std::round(v);
    return std::abs(v - r) < kEdgeSnap ? r : v;
}

} // namespace

std::string to_string(TileKey key)
{
    return std::to_string(key.z) + "/" + std::to_string(key.x) + "/" + std::to_string(key.y);
}

double mercator_tile_extent_m(int zoom, double latitude_deg)
{
    check_zoom(zoom);
    check_latitude(latitude_deg);
    return kEquatorialCircumference * std::cos(deg2rad(latitude_deg)) / std::ldexp(1.0, zoom);
}

Vec2 lonlat_to_mercator(Vec2 lonlat)
{
    check_latitude(lonlat.y);
    const double x = deg2rad(lonlat.x) * kMercatorHalfExtent / std::numbers::pi;
    const double y = std::log(std::tan(std::numbers::pi / 4.0 + deg2rad(lonlat.y) / 2.0)) * kMercatorHalfExtent /
                     std::numbers::pi;
    return {x, y};
}

Vec2 mercator_to_lonlat(Vec2 m)
{
    const double lon = rad2deg(m.x / kMercatorHalfExtent * std::numbers::pi);
    const double lat = rad2deg(2.0 * std::atan(std::exp(m.y / kMercatorHalfExtent * std::numbers::pi)) -
                               std::numbers::pi / 2.0);
    return {lon, lat};
}

Vec2 lonlat_to_tile(Vec2 lonlat, int zoom)
{
    check_zoom(zoom);
    check_latitude(lonlat.y);
    const double n = std::ldexp(1.0, zoom);
    const double lat = deg2rad(lonlat.y);
    const double x = (lonlat.x + 180.0) / 360.0 * n;
    const double y = (1.0 - std::asinh(std::tan(lat)) / std::numbers::pi) / 2.0 * n;
    return {x, y};
}

RealRect tile_bounds_lonlat(TileKey key)
{
    check_zoom(key.z);
    const Vec2 nw = from_tile_space({static_cast<double>(key.x), static_cast<double>(key.y)}, Frame::LonLat, key.z);
    const Vec2 se =
        from_tile_space({static_cast<double>(key.x + 1), static_cast<double>(key.y + 1)}, Frame::LonLat, key.z);
    return {nw, se - nw};
}

std::vector<MercatorTile> mercator_tiles_for_bounds(const RasterMeta& raster, int zoom, bool include_partial)
{
    check_zoom(zoom);
    const Frame frame = frame_for(raster);
    const GeoTransform& gt = raster.geotransform;
    const Vec2 extent = raster.extent_px.as_vec();

    Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Vec2 hi{-lo.x, -lo.y};
    for (const Vec2 corner : {Vec2{0, 0}, Vec2{extent.x, 0}, Vec2{0, extent.y}, extent}) {
        const Vec2 t = to_tile_space(gt.apply(corner), frame, zoom);
        lo = {std::min(lo.x, t.x), std::min(lo.y, t.y)};
        hi = {std::max(hi.x, t.x), std::max(hi.y, t.y)};
    }
    lo = {snap_edge(lo.x), snap_edge(lo.y)};
    hi = {snap_edge(hi.x), snap_edge(hi.y)};

    const std::int64_t n = std::int64_t{1} << zoom;
    auto clamp_key = [n](double v) { return std::clamp<std::int64_t>(static_cast<std::int64_t>(v), 0, n - 1); };
    const std::int64_t x_begin = clamp_key(std::floor(lo.x));
    const std::int64_t y_begin = clamp_key(std::floor(lo.y));
    const std::int64_t x_end = clamp_key(std::ceil(hi.x) - 1);
    const std::int64_t y_end = clamp_key(std::ceil(hi.y) - 1);

    std::vector<MercatorTile> tiles;
    for (std::int64_t y = y_begin; y <= y_end; ++y) {
        for (std::int64_t x = x_begin; x <= x_end; ++x) {
            const double fx = static_cast<double>(x);
            const double fy = static_cast<double>(y);
            const bool inside = fx >= lo.x && fx + 1.0 <= hi.x && fy >= lo.y && fy + 1.0 <= hi.y;
            if (!inside && !include_partial) continue;

            Vec2 plo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
            Vec2 phi{-plo.x, -plo.y};
            for (const Vec2 corner : {Vec2{fx, fy}, Vec2{fx + 1, fy}, Vec2{fx, fy + 1}, Vec2{fx + 1, fy + 1}}) {
                const Vec2 p = gt.apply_inverse(from_tile_space(corner, frame, zoom));
                plo = {std::min(plo.x, p.x), std::min(plo.y, p.y)};
                phi = {std::max(phi.x, p.x), std::max(phi.y, p.y)};
            }
            tiles.push_back({{zoom, x, y}, {plo, phi - plo}, !inside});
        }
    }
    return tiles;
}

} // namespace eotile
