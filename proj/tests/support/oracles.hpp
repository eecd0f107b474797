#pragma once

// Brute-force references used by the unit and acceptance suites.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "eotile/fusion.hpp"
#include "eotile/label_grid.hpp"
#include "eotile/scheme.hpp"

namespace eotile::testing {

/// Tile count by stepping positions k*s from 0: Floor counts tiles that fit
/// inside [0, r]; Ceil counts the fewest tiles whose union reaches r.
std::int64_t scan_tile_count(double r, double s, double t, Rounding rounding);

/// Per-axis nearest tile center over every tile in `aux`, ties to the lower
/// index (within 1e-9). Returns, for each raster pixel covered by one of
/// `base_windows`, the donor's prediction looked up by the coordinate mapping
/// p = t_f * p_local + t_o; other pixels hold kIgnoreLabel.
LabelGrid nearest_center_fuse(const std::vector<TileRef>& aux, const std::vector<PixelWindow>& base_windows,
                              std::int64_t width, std::int64_t height, const PredictionSet& predictions,
                              const std::optional<ModelSpec>& model);

/// Per-axis donor lookup used by nearest_center_fuse.
std::int64_t nearest_center_index(const std::vector<double>& centers, double position);

LabelGrid random_labels(std::int64_t width, std::int64_t height, int classes, std::mt19937_64& rng);

/// Truth crop of a tile with pixels within `w` of the listed sides replaced
/// by (label + 1) mod classes.
struct Sides {
    bool left = true;
    bool right = true;
    bool top = true;
    bool bottom = true;
};
LabelGrid corrupt_border(const LabelGrid& crop, std::int64_t w, Sides sides, int classes);

/// Fresh, empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

} // namespace eotile::testing
