#include "eotile/georef.hpp"

#include <cmath>

#include "eotile/error.hpp"

namespace eotile {

namespace {

constexpr double kDegenerateTolerance = 1e-300;

void require_positive_gsd(Vec2 gsd)
{
    if (!(gsd.x > 0.0) || !(gsd.y > 0.0) || !std::isfinite(gsd.x) || !std::isfinite(gsd.y))
        throw_invalid("gsd must be positive and finite");
}

} // namespace

GeoTransform GeoTransform::from_coefficients(const std::array<double, 6>& c)
{
    GeoTransform gt;
    gt.scale = {c[0], c[4]};
    gt.skew = {c[1], c[3]};
    gt.origin = {c[2], c[5]};
    return gt;
}

std::array<double, 6> GeoTransform::coefficients() const
{
    return {scale.x, skew.x, origin.x, skew.y, scale.y, origin.y};
}

bool GeoTransform::invertible() const
{
    const double det = determinant();
    return std::isfinite(det) && std::abs(det) > kDegenerateTolerance;
}

Vec2 GeoTransform::apply(Vec2 p) const
{
    return {scale.x * p.x + skew.x * p.y + origin.x, skew.y * p.x + scale.y * p.y + origin.y};
}

Vec2 GeoTransform::apply_inverse(Vec2 w) const
{
    if (!invertible()) throw_invalid("geotransform is not invertible");
    const double det = determinant();
    const double dx = w.x - origin.x;
    const double dy = w.y - origin.y;
    return {(scale.y * dx - skew.x * dy) / det, (-skew.y * dx + scale.x * dy) / det};
}

GeoTransform GeoTransform::inverse() const
{
    if (!invertible()) throw_invalid("geotransform is not invertible");
    const double det = determinant();
    GeoTransform inv;
    inv.scale = {scale.y / det, scale.x / det};
    inv.skew = {-skew.x / det, -skew.y / det};
    inv.origin = {(skew.x * origin.y - scale.y * origin.x) / det,
                  (skew.y * origin.x - scale.x * origin.y) / det};
    return inv;
}

GeoTransform GeoTransform::compose(const GeoTransform& l) const
{
    // [a b c; d e f] * [la lb lc; ld le lf]
    GeoTransform r;
    r.scale.x = scale.x * l.scale.x + skew.x * l.skew.y;
    r.skew.x = scale.x * l.skew.x + skew.x * l.scale.y;
    r.origin.x = scale.x * l.origin.x + skew.x * l.origin.y + origin.x;
    r.skew.y = skew.y * l.scale.x + scale.y * l.skew.y;
    r.scale.y = skew.y * l.skew.x + scale.y * l.scale.y;
    r.origin.y = skew.y * l.origin.x + scale.y * l.origin.y + origin.y;
    return r;
}

std::string to_string(CrsUnits units)
{
    switch (units) {
    case CrsUnits::Meters: return "meters";
    case CrsUnits::Degrees: return "degrees";
    case CrsUnits::Unknown: break;
    }
    return "unknown";
}

CrsUnits parse_crs_units(const std::string& text)
{
    if (text == "meters" || text == "m" || text == "metre" || text == "meter") return CrsUnits::Meters;
    if (text == "degrees" || text == "deg" || text == "degree") return CrsUnits::Degrees;
    if (text == "unknown") return CrsUnits::Unknown;
    throw_invalid("unknown CRS units '" + text + "'");
}

CrsUnits infer_crs_units(const std::string& crs)
{
    const std::string prefix = "EPSG:";
    if (crs.rfind(prefix, 0) != 0) return CrsUnits::Unknown;
    int code = 0;
    try {
        code = std::stoi(crs.substr(prefix.size()));
    } catch (const std::exception&) {
        return CrsUnits::Unknown;
    }
    if (code == 4326 || code == 4258 || code == 4269 || code == 4979) return CrsUnits::Degrees;
    if (code == 3857 || code == 900913) return CrsUnits::Meters;
    if ((code >= 32601 && code <= 32660) || (code >= 32701 && code <= 32760)) return CrsUnits::Meters;
    if (code >= 25828 && code <= 25838) return CrsUnits::Meters; // ETRS89 / UTM
    return CrsUnits::Unknown;
}

void RasterMeta::validate() const
{
    if (extent_px.width <= 0 || extent_px.height <= 0) throw_invalid("raster extent must be positive");
    require_positive_gsd(gsd);
    if (!geotransform.invertible()) throw_invalid("raster geotransform is degenerate");
}

Vec2 gsd_from_transform(const GeoTransform& t)
{
    return {std::hypot(t.scale.x, t.skew.y), std::hypot(t.skew.x, t.scale.y)};
}

Vec2 meters_to_pixels(Vec2 meters, Vec2 gsd)
{
    require_positive_gsd(gsd);
    return {meters.x / gsd.x, meters.y / gsd.y};
}

Vec2 pixels_to_meters(Vec2 pixels, Vec2 gsd)
{
    require_positive_gsd(gsd);
    return {pixels.x * gsd.x, pixels.y * gsd.y};
}

SchemeSpec to_pixel_spec(const SchemeSpec& spec, Vec2 gsd)
{
    if (spec.unit == LengthUnit::Pixels) return spec;
    SchemeSpec px = spec;
    px.unit = LengthUnit::Pixels;
    px.tile_extent = meters_to_pixels(spec.tile_extent, gsd);
    px.stride = meters_to_pixels(spec.stride, gsd);
    if (auto* anchored = std::get_if<CornerAnchored>(&px.origin))
        anchored->offset = meters_to_pixels(anchored->offset, gsd);
    return px;
}

GeoTransform tile_georef(const GeoTransform& raster, const TileRef& tile, const std::optional<ModelSpec>& model)
{
    if (!raster.invertible()) throw_invalid("raster geotransform is degenerate");
    GeoTransform local;
    if (model) {
        if (model->width <= 0 || model->height <= 0) throw_invalid("model input size must be positive");
        local.scale = {tile.extent_px.x / static_cast<double>(model->width),
                       tile.extent_px.y / static_cast<double>(model->height)};
    }
    local.origin = tile.origin_px;
    return raster.compose(local);
}

GeoTransform window_georef(const GeoTransform& raster, const PixelWindow& window)
{
    GeoTransform local;
    local.origin = {static_cast<double>(window.x0), static_cast<double>(window.y0)};
    return raster.compose(local);
}

std::vector<TileRef> pixel_grid_tiles(const RasterMeta& raster, Vec2 tile_px, bool include_partial)
{
    SchemeSpec spec;
    spec.tile_extent = tile_px;
    spec.stride = tile_px;
    spec.rounding = include_partial ? Rounding::Ceil : Rounding::Floor;
    spec.origin = CornerAnchored{};
    return enumerate_tiles(build_scheme(raster.extent_px.as_vec(), spec));
}

} // namespace eotile
