#pragma once

// Tile manifest (schema v1): the exchange contract between tiling and fusion.
// A manifest lists every tile of one raster with its exact and discretized
// placement and georeferencing. Prediction tiles are single-band 8-bit images
// "<prediction_dir>/<tile id>.<image_format>"; relative directories resolve
// against the manifest's own directory.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eotile/georef.hpp"
#include "eotile/scheme.hpp"

namespace eotile {

inline constexpr int kManifestVersion = 1;

struct ManifestTile {
    TileRef tile;
    GeoTransform georef;
};

struct TileManifest {
    int version = kManifestVersion;
    std::string raster_id;
    RasterMeta raster;
    SchemeSpec requested; ///< as configured, possibly metric
    int stride_divisor = 0; ///< m when stride = extent / m, else 0
    TilingScheme scheme; ///< resolved, pixel units
    std::optional<ModelSpec> model_input;
    std::string tile_dir = "tiles";
    std::string prediction_dir = "predictions";
    std::string image_format = "png";
    std::vector<ManifestTile> tiles;

    /// Resolves the scheme against the raster and fills tiles. Tile georefs
    /// map model-output pixels when a model is given, and the cut window
    /// otherwise.
    static TileManifest create(std::string raster_id, const RasterMeta& raster, const SchemeSpec& requested,
                               int stride_divisor, const std::optional<ModelSpec>& model);

    /// Unique ids, tile count equal to the scheme total.
    void validate() const;
};

/// Canonical JSON: sorted keys, shortest round-trip number formatting, so
/// equal manifests serialize byte-identically.
std::string to_json(const TileManifest& manifest);
TileManifest manifest_from_json(std::string_view json);

void write_manifest(const TileManifest& manifest, const std::filesystem::path& path);
TileManifest read_manifest(const std::filesystem::path& path);

std::string to_string(const OriginPolicy& policy);

} // namespace eotile
