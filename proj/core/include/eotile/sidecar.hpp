#pragma once

// JSON sidecar (schema v1) carrying raster georeferencing:
//
//   {"version": 1, "width": 1024, "height": 1024,
//    "gsd": [0.1, 0.1],                      // optional for metric CRSs
//    "transform": [a, b, c, d, e, f],        // row-major 2x3 affine
//    "crs": "EPSG:32633",
//    "units": "meters",                      // optional, inferred from crs
//    "nodata": 255}                          // optional

#include <filesystem>
#include <string>
#include <string_view>

#include "eotile/georef.hpp"

namespace eotile {

inline constexpr int kSidecarVersion = 1;

/// Throws ParseError naming the offending field on schema violations.
RasterMeta read_sidecar(std::string_view json);
RasterMeta read_sidecar_file(const std::filesystem::path& path);

/// Canonical (sorted keys) sidecar text.
std::string write_sidecar(const RasterMeta& meta);

/// Sidecar location convention: "<raster path>.json".
std::filesystem::path sidecar_path_for(const std::filesystem::path& raster);

} // namespace eotile
