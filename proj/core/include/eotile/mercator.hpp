#pragma once

// Slippy-map (web mercator) baseline tiler used for scheme comparison.

#include <cstdint>
#include <string>
#include <vector>

#include "eotile/georef.hpp"

namespace eotile {

inline constexpr double kEquatorialCircumference = 40075016.6856;
inline constexpr double kMercatorHalfExtent = kEquatorialCircumference / 2.0;
inline constexpr double kMercatorMaxLatitude = 85.0511287798066;
inline constexpr int kMercatorMaxZoom = 23;

struct TileKey {
    int z = 0;
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend constexpr bool operator==(TileKey, TileKey) = default;
    friend constexpr auto operator<=>(TileKey, TileKey) = default;
};

std::string to_string(TileKey key);

struct MercatorTile {
    TileKey key;
    RealRect window_px; ///< tile footprint in raster pixel coordinates
    bool partial = false; ///< not fully inside the raster bounds
};

/// Ground extent of one tile edge at the given latitude.
double mercator_tile_extent_m(int zoom, double latitude_deg);

Vec2 lonlat_to_mercator(Vec2 lonlat);
Vec2 mercator_to_lonlat(Vec2 meters);

/// Fractional tile coordinates (x right, y down) at zoom.
Vec2 lonlat_to_tile(Vec2 lonlat, int zoom);

/// North-west and south-east corner of a tile, in lon/lat.
RealRect tile_bounds_lonlat(TileKey key);

/// Keys of all tiles intersecting the raster bounds (row-major by y then x).
/// The raster CRS must be EPSG:4326 or EPSG:3857; anything else throws
/// unsupported-crs. With include_partial=false only tiles fully inside the
/// raster are returned.
std::vector<MercatorTile> mercator_tiles_for_bounds(const RasterMeta& raster, int zoom, bool include_partial);

} // namespace eotile
