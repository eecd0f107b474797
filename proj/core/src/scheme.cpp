#include "eotile/scheme.hpp"

#include <cmath>
#include <limits>

#include "eotile/error.hpp"

namespace eotile {

namespace {

constexpr double kSnapTolerance = 1e-9;

// Quotients that should be integers in exact arithmetic (e.g. 750/375) often
// land a few ulps off; snap them before applying floor/ceil.
double snap(double q)
{
    const double nearest = std::round(q);
    if (std::abs(q - nearest) <= kSnapTolerance * std::max(1.0, std::abs(q))) return nearest;
    return q;
}

std::int64_t apply_rounding(double q, Rounding rounding)
{
    q = snap(q);
    return static_cast<std::int64_t>(rounding == Rounding::Floor ? std::floor(q) : std::ceil(q));
}

void require_positive(double value, const char* name)
{
    if (!(value > 0.0) || !std::isfinite(value))
        throw_invalid(std::string(name) + " must be positive and finite, got " + std::to_string(value));
}

void check_1d(double r, double s, double t)
{
    require_positive(r, "raster extent");
    require_positive(s, "stride");
    require_positive(t, "tile extent");
}

struct AxisLayout {
    std::int64_t count = 0;
    double offset = 0.0;
};

AxisLayout layout_centered(double r, double s, double t, Rounding rounding)
{
    return {tile_count_1d(r, s, t, rounding), offset_1d(r, s, t, rounding)};
}

// Lattice origins anchor + k*s for integer k. Floor keeps tiles fully inside
// [0, r]; Ceil keeps the minimal run of tiles whose union reaches both edges.
AxisLayout layout_anchored(double r, double s, double t, double anchor, Rounding rounding)
{
    std::int64_t first = 0;
    std::int64_t last = 0;
    if (rounding == Rounding::Floor) {
        first = apply_rounding(-anchor / s, Rounding::Ceil);
        last = apply_rounding((r - t - anchor) / s, Rounding::Floor);
    } else {
        first = apply_rounding(-anchor / s, Rounding::Floor);
        last = std::max(first, apply_rounding((r - t - anchor) / s, Rounding::Ceil));
    }
    AxisLayout layout;
    layout.count = std::max<std::int64_t>(0, last - first + 1);
    layout.offset = anchor + static_cast<double>(first) * s;
    return layout;
}

} // namespace

void SchemeSpec::validate() const
{
    require_positive(tile_extent.x, "tile extent x");
    require_positive(tile_extent.y, "tile extent y");
    require_positive(stride.x, "stride x");
    require_positive(stride.y, "stride y");
    if (const auto* anchored = std::get_if<CornerAnchored>(&origin)) {
        if (!std::isfinite(anchored->offset.x) || !std::isfinite(anchored->offset.y))
            throw_invalid("anchor offset must be finite");
    }
}

SchemeSpec SchemeSpec::with_stride_divisor(Vec2 tile_extent, int m, Rounding rounding,
                                           OriginPolicy origin, LengthUnit unit)
{
    if (m < 1) throw_invalid("stride divisor m must be >= 1, got " + std::to_string(m));
    SchemeSpec spec;
    spec.tile_extent = tile_extent;
    spec.stride = tile_extent / static_cast<double>(m);
    spec.unit = unit;
    spec.rounding = rounding;
    spec.origin = origin;
    return spec;
}

std::string tile_id(GridIndex index)
{
    return "tile_" + std::to_string(index.i) + "_" + std::to_string(index.j);
}

TileRef TilingScheme::tile(GridIndex index) const
{
    TileRef tile;
    tile.index = index;
    tile.origin_px = {offset.x + static_cast<double>(index.i) * spec.stride.x,
                      offset.y + static_cast<double>(index.j) * spec.stride.y};
    tile.extent_px = spec.tile_extent;
    tile.window = {round_half_up(tile.origin_px.x), round_half_up(tile.origin_px.y),
                   round_half_up(tile.origin_px.x + tile.extent_px.x),
                   round_half_up(tile.origin_px.y + tile.extent_px.y)};
    tile.id = tile_id(index);
    return tile;
}

std::int64_t tile_count_1d(double raster, double stride, double tile, Rounding rounding)
{
    check_1d(raster, stride, tile);
    const std::int64_t n = apply_rounding((raster + stride - tile) / stride, rounding);
    // A single tile always covers the raster when the tile is at least as
    // large, so Ceil never drops below one.
    return std::max<std::int64_t>(rounding == Rounding::Ceil ? 1 : 0, n);
}

double coverage_1d(double raster, double stride, double tile, Rounding rounding)
{
    const std::int64_t n = tile_count_1d(raster, stride, tile, rounding);
    if (n == 0) return 0.0;
    return static_cast<double>(n) * stride + tile - stride;
}

double offset_1d(double raster, double stride, double tile, Rounding rounding)
{
    return (raster - coverage_1d(raster, stride, tile, rounding)) / 2.0;
}

std::int64_t tile_count_2d(Vec2 raster, Vec2 stride, Vec2 tile, Rounding rounding)
{
    return tile_count_1d(raster.x, stride.x, tile.x, rounding) *
           tile_count_1d(raster.y, stride.y, tile.y, rounding);
}

TilingScheme build_scheme(Vec2 raster_extent, const SchemeSpec& spec)
{
    spec.validate();
    if (spec.unit != LengthUnit::Pixels)
        throw_invalid("build_scheme requires a pixel-unit spec; convert metric specs with to_pixel_spec");
    require_positive(raster_extent.x, "raster extent x");
    require_positive(raster_extent.y, "raster extent y");

    AxisLayout ax;
    AxisLayout ay;
    if (const auto* anchored = std::get_if<CornerAnchored>(&spec.origin)) {
        Vec2 anchor = anchored->offset;
        if (anchored->frame == AnchorFrame::RasterCenter) anchor = anchor + raster_extent * 0.5;
        ax = layout_anchored(raster_extent.x, spec.stride.x, spec.tile_extent.x, anchor.x, spec.rounding);
        ay = layout_anchored(raster_extent.y, spec.stride.y, spec.tile_extent.y, anchor.y, spec.rounding);
    } else {
        ax = layout_centered(raster_extent.x, spec.stride.x, spec.tile_extent.x, spec.rounding);
        ay = layout_centered(raster_extent.y, spec.stride.y, spec.tile_extent.y, spec.rounding);
    }

    TilingScheme scheme;
    scheme.spec = spec;
    scheme.raster_extent = raster_extent;
    scheme.counts = {ax.count, ay.count};
    scheme.offset = {ax.offset, ay.offset};
    if (scheme.counts.x == 0 || scheme.counts.y == 0) scheme.counts = {0, 0};
    return scheme;
}

std::vector<TileRef> enumerate_tiles(const TilingScheme& scheme)
{
    if (scheme.total() > kMaxEnumeratedTiles)
        throw_invalid("scheme has " + std::to_string(scheme.total()) + " tiles, more than the limit of " +
                      std::to_string(kMaxEnumeratedTiles));
    std::vector<TileRef> tiles;
    tiles.reserve(static_cast<std::size_t>(scheme.total()));
    for (std::int64_t j = 0; j < scheme.counts.y; ++j)
        for (std::int64_t i = 0; i < scheme.counts.x; ++i) tiles.push_back(scheme.tile({i, j}));
    return tiles;
}

std::int64_t augmented_count(double raster, double tile, int m, Rounding rounding)
{
    if (m < 1) throw_invalid("stride divisor m must be >= 1, got " + std::to_string(m));
    require_positive(raster, "raster extent");
    require_positive(tile, "tile extent");
    const double md = static_cast<double>(m);
    const std::int64_t n = apply_rounding((md * (raster - tile) + tile) / tile, rounding);
    return std::max<std::int64_t>(rounding == Rounding::Ceil ? 1 : 0, n);
}

std::string to_string(Rounding rounding)
{
    return rounding == Rounding::Floor ? "floor" : "ceil";
}

Rounding parse_rounding(const std::string& text)
{
    if (text == "floor") return Rounding::Floor;
    if (text == "ceil") return Rounding::Ceil;
    throw_invalid("unknown rounding mode '" + text + "' (expected floor or ceil)");
}

} // namespace eotile
