#pragma once

#include <filesystem>

#include "eotile/georef.hpp"
#include "eotile/label_grid.hpp"

namespace eotile {

struct LabelRaster {
    LabelGrid grid;
    RasterMeta meta;
};

/// Single-band 8-bit image (format by extension) plus "<path>.json" sidecar.
/// Throws invalid-argument when the grid extent differs from the metadata.
void write_label_raster(const LabelGrid& grid, const RasterMeta& meta, const std::filesystem::path& path);
LabelRaster read_label_raster(const std::filesystem::path& path);

} // namespace eotile
