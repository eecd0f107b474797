#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eotile/fusion.hpp"
#include "eotile/georef.hpp"
#include "eotile/label_grid.hpp"
#include "eotile/scheme.hpp"

namespace eotile {

struct ErrorBin {
    std::int64_t distance_px = 0; ///< bin center, even integers
    double mean_error = 0.0;
    std::int64_t count = 0;
};

/// Running per-bin error counts. Distances are measured in prediction-grid
/// pixels from pixel centers to the grid center and binned to the nearest
/// even integer.
class ErrorHistogram {
public:
    static std::int64_t bin_of(double distance);

    void add(double distance, bool wrong);
    /// Compares a prediction with a ground-truth crop of the same size;
    /// ground-truth pixels equal to kIgnoreLabel are skipped.
    void add_tile(const LabelGrid& prediction, const LabelGrid& truth);

    std::vector<ErrorBin> bins() const;

private:
    std::map<std::int64_t, std::pair<std::int64_t, std::int64_t>> counts_; ///< bin -> (wrong, total)
};

/// Ground truth aligned to a tile's prediction grid: the window itself without
/// a model, nearest-neighbor sampling of the exact tile rectangle otherwise.
/// Positions outside the raster read kIgnoreLabel.
LabelGrid crop_labels(const LabelGrid& truth, const TileRef& tile, const std::optional<ModelSpec>& model = {});

/// Error rate against distance from the tile center across all `tiles`.
/// Throws missing-tile when a tile has no prediction.
std::vector<ErrorBin> error_vs_center_distance(std::span<const TileRef> tiles, const PredictionSet& predictions,
                                               const LabelGrid& truth, const std::optional<ModelSpec>& model = {});

/// "distance_px,mean_error,count" followed by one row per bin.
std::string error_table_csv(std::span<const ErrorBin> bins);

} // namespace eotile
