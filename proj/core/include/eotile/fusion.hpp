#pragma once

// Stride-augmented prediction fusion. Each base tile (stride = extent) is
// rebuilt from the central "reliable" parts of auxiliary tiles laid out with
// stride t/m; every pixel is taken from the auxiliary tile whose center is
// nearest on each axis.

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "eotile/georef.hpp"
#include "eotile/label_grid.hpp"
#include "eotile/scheme.hpp"
#include "eotile/spatial_index.hpp"

namespace eotile {

/// [center - s/2, center + s/2].
Interval reliable_interval(double center, double stride);

/// Number of auxiliary neighbors on one axis whose reliable interval reaches
/// into a tile: 2 * ceil((t - s) / (2 s)).
std::int64_t substitution_neighbor_count(double stride, double tile);

/// (sigma_x + 1)(sigma_y + 1) - 1.
std::int64_t substitution_neighbor_count_2d(Vec2 stride, Vec2 tile);

struct ReliableRegion {
    Interval x; ///< real interval after edge extension and clipping
    Interval y;
    PixelWindow window; ///< pixels whose nearest tile center (per axis) is this tile
};

/// Reliable region of the tile at `index` within `scheme`. Tiles on the first
/// or last row/column extend their region to the raster edge; everything is
/// clipped to the raster. Across a scheme the windows partition the raster,
/// with pixels equidistant from two centers going to the lower index.
ReliableRegion reliable_region(const TilingScheme& scheme, GridIndex index);

struct DonorAssignment {
    TileRef donor;
    PixelWindow destination; ///< raster pixels copied from this donor
};

struct BaseTilePlan {
    TileRef base;
    PixelWindow destination; ///< base window clipped to the raster
    std::vector<DonorAssignment> donors; ///< row-major by donor index
};

struct FusionPlan {
    TilingScheme base;
    TilingScheme aux;
    int stride_divisor = 1;
    std::vector<TileRef> aux_tiles;
    std::vector<BaseTilePlan> tiles;
};

/// Base scheme matching `aux` with stride equal to the tile extent.
TilingScheme base_scheme_for(const TilingScheme& aux);

/// Throws alignment-error unless the base lattice is a sub-lattice of the
/// auxiliary lattice: same raster and extent, base stride = extent, aux
/// stride = extent / m for integer m, and tile origins that coincide.
int check_alignment(const TilingScheme& base, const TilingScheme& aux);

FusionPlan plan_fusion(const TilingScheme& base, const TilingScheme& aux);
FusionPlan plan_fusion(const TilingScheme& base, const TilingScheme& aux, const SpatialIndex& aux_index,
                       std::vector<TileRef> aux_tiles);

/// Predictions keyed by tile id.
using PredictionSet = std::unordered_map<std::string, LabelGrid>;

struct FuseOptions {
    /// Predictions were produced at model resolution; map raster pixels into
    /// the prediction grid by the tile's exact georeference scaling.
    std::optional<ModelSpec> model;
    unsigned threads = 1;
};

/// Raster-sized label grid; pixels not covered by any base tile hold
/// kIgnoreLabel. Throws missing-tile for absent donor predictions and
/// invalid-argument for predictions of the wrong size.
LabelGrid fuse(const FusionPlan& plan, const PredictionSet& predictions, const FuseOptions& options = {});

/// Prediction-grid cell holding raster pixel (x, y) of `tile`, clamped to the
/// grid. Without a model the mapping is the window offset.
std::int64_t local_index(double pixel, double tile_origin, std::int64_t window_origin, double tile_extent,
                         const std::optional<std::int64_t>& model_extent);

} // namespace eotile
