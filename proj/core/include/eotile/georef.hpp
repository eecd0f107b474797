#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "eotile/geometry.hpp"
#include "eotile/scheme.hpp"

namespace eotile {

/// Affine pixel -> CRS mapping
///
///     | scale.x  skew.x   origin.x |
///     | skew.y   scale.y  origin.y |
///     | 0        0        1        |
///
/// applied to column vectors (px, py, 1). Note the coefficient order of
/// `coefficients()` is row-major (a b c / d e f), which differs from GDAL's
/// (c a b f d e).
struct GeoTransform {
    Vec2 scale{1.0, 1.0};
    Vec2 skew{0.0, 0.0};
    Vec2 origin{0.0, 0.0};

    static GeoTransform from_coefficients(const std::array<double, 6>& rowMajor);
    std::array<double, 6> coefficients() const;

    double determinant() const { return scale.x * scale.y - skew.x * skew.y; }
    bool invertible() const;

    Vec2 apply(Vec2 pixel) const;
    /// Throws invalid-argument when the transform is degenerate.
    Vec2 apply_inverse(Vec2 world) const;
    GeoTransform inverse() const;

    /// Matrix product this * local.
    GeoTransform compose(const GeoTransform& local) const;

    friend bool operator==(const GeoTransform&, const GeoTransform&) = default;
};

enum class CrsUnits { Meters, Degrees, Unknown };

std::string to_string(CrsUnits units);
CrsUnits parse_crs_units(const std::string& text);

/// Best-effort unit inference for common EPSG identifiers ("EPSG:4326" ->
/// degrees, "EPSG:3857"/UTM -> meters).
CrsUnits infer_crs_units(const std::string& crs);

struct RasterSize {
    std::int64_t width = 0;
    std::int64_t height = 0;

    Vec2 as_vec() const { return {static_cast<double>(width), static_cast<double>(height)}; }
    friend constexpr bool operator==(RasterSize, RasterSize) = default;
};

struct RasterMeta {
    RasterSize extent_px;
    Vec2 gsd; ///< meters per pixel, per axis
    GeoTransform geotransform;
    std::string crs;
    CrsUnits units = CrsUnits::Unknown;
    std::optional<int> nodata;
    bool gsd_explicit = false; ///< gsd was stated (sidecar, override), not derived from the transform

    /// Metric lengths convert to pixels only with a metric CRS or a stated GSD.
    bool metric_gsd_known() const { return gsd_explicit || units == CrsUnits::Meters; }

    /// Throws invalid-argument on non-positive extent/gsd or a degenerate transform.
    void validate() const;
};

/// Model input size (n_e) in pixels.
struct ModelSpec {
    std::int64_t width = 0;
    std::int64_t height = 0;

    friend constexpr bool operator==(ModelSpec, ModelSpec) = default;
};

/// Pixel size |column| of the transform per axis.
Vec2 gsd_from_transform(const GeoTransform& transform);

Vec2 meters_to_pixels(Vec2 meters, Vec2 gsd);
Vec2 pixels_to_meters(Vec2 pixels, Vec2 gsd);

/// Converts a metric spec (extent, stride and anchor offset) to pixel units
/// using the raster GSD. Pixel specs are returned unchanged.
SchemeSpec to_pixel_spec(const SchemeSpec& spec, Vec2 gsd);

/// Georeferencing of tile data: R_g * T_l, where T_l scales by
/// extent / model input (or 1 when no model) and translates by the exact tile
/// origin. Composing the result with model-output pixel coordinates yields
/// CRS coordinates.
GeoTransform tile_georef(const GeoTransform& raster, const TileRef& tile,
                         const std::optional<ModelSpec>& model = std::nullopt);

/// Georeferencing of an integer pixel window cut from the raster at scale 1.
GeoTransform window_georef(const GeoTransform& raster, const PixelWindow& window);

/// Corner-anchored non-overlapping grid of tile_px tiles; Ceil rounding when
/// partial tiles are included, Floor otherwise.
std::vector<TileRef> pixel_grid_tiles(const RasterMeta& raster, Vec2 tile_px, bool include_partial);

} // namespace eotile
