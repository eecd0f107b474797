#pragma once

// Tiling mathematics: tile counts, covered distance, symmetric offsets,
// tile enumeration and augmentation counting. Pure functions over values,
// no I/O and no geo-awareness.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "eotile/geometry.hpp"

namespace eotile {

enum class Rounding { Floor, Ceil };

enum class LengthUnit { Pixels, Meters };

/// Scheme placed symmetrically inside the raster (equal margins).
struct Centered {
    friend constexpr bool operator==(Centered, Centered) = default;
};

enum class AnchorFrame {
    RasterOrigin, ///< anchor measured from the raster's top-left corner
    RasterCenter, ///< anchor measured from the raster's center
};

/// Tile lattice passes through a fixed anchor point: some tile corner sits at
/// `offset` (relative to `frame`) and tiles are laid out in both directions
/// from there. Anchoring at the raster center makes lattices of different
/// strides nest into one another, which fusion relies on.
struct CornerAnchored {
    Vec2 offset;
    AnchorFrame frame = AnchorFrame::RasterOrigin;

    friend constexpr bool operator==(const CornerAnchored&, const CornerAnchored&) = default;
};

using OriginPolicy = std::variant<Centered, CornerAnchored>;

struct SchemeSpec {
    Vec2 tile_extent;
    Vec2 stride;
    LengthUnit unit = LengthUnit::Pixels;
    Rounding rounding = Rounding::Floor;
    OriginPolicy origin = Centered{};

    /// Throws invalid-argument when extents or strides are not positive/finite.
    void validate() const;

    /// Stride of tile_extent / m on both axes.
    static SchemeSpec with_stride_divisor(Vec2 tile_extent, int m, Rounding rounding,
                                          OriginPolicy origin = Centered{},
                                          LengthUnit unit = LengthUnit::Pixels);
};

struct GridIndex {
    std::int64_t i = 0; ///< column (x)
    std::int64_t j = 0; ///< row (y)

    friend constexpr bool operator==(GridIndex, GridIndex) = default;
    friend constexpr auto operator<=>(GridIndex, GridIndex) = default;
};

struct TileRef {
    GridIndex index;
    Vec2 origin_px; ///< exact, pre-discretization
    Vec2 extent_px;
    PixelWindow window; ///< round-half-up of [origin, origin + extent)
    std::string id;

    Vec2 center() const { return origin_px + extent_px * 0.5; }
};

std::string tile_id(GridIndex index);

struct TilingScheme {
    SchemeSpec spec; ///< always in pixel units
    Vec2 raster_extent;
    Count2 counts;
    Vec2 offset; ///< origin of tile (0, 0); may be negative under Ceil

    std::int64_t total() const { return counts.total(); }
    bool empty() const { return total() == 0; }

    /// Tile at grid index; the index need not be inside the counts.
    TileRef tile(GridIndex index) const;
};

// One-dimensional forms. All throw invalid-argument for non-positive or
// non-finite inputs.
std::int64_t tile_count_1d(double raster, double stride, double tile, Rounding rounding);
double coverage_1d(double raster, double stride, double tile, Rounding rounding);
double offset_1d(double raster, double stride, double tile, Rounding rounding);

std::int64_t tile_count_2d(Vec2 raster, Vec2 stride, Vec2 tile, Rounding rounding);

/// Resolves a pixel-unit spec against a raster extent. Metric specs must be
/// converted first (see to_pixel_spec in georef.hpp).
TilingScheme build_scheme(Vec2 raster_extent, const SchemeSpec& spec);

inline constexpr std::int64_t kMaxEnumeratedTiles = std::int64_t{1} << 24;

/// Row-major (rows outer, columns inner) list of all tiles. Throws
/// invalid-argument above kMaxEnumeratedTiles.
std::vector<TileRef> enumerate_tiles(const TilingScheme& scheme);

/// Tiles per axis for stride t/m, via the closed growth form
/// rho((m (r - t) + t) / t).
std::int64_t augmented_count(double raster, double tile, int m, Rounding rounding);

std::string to_string(Rounding rounding);
Rounding parse_rounding(const std::string& text);

} // namespace eotile
