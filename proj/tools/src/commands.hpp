#pragma once

#include <CLI11.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "eotile/fusion.hpp"
#include "eotile/manifest.hpp"
#include "log.hpp"
#include "options.hpp"

namespace eotile::cli {

struct Context {
    std::ostream& out;
    Log log;
};

struct TileOptions {
    std::vector<std::string> rasters;
    std::string out_dir;
    SchemeOptions scheme;
    std::string format = "png";
    std::string interp = "bilinear";
    unsigned jobs = 1;
    bool manifest_only = false;
};

struct RasterizeOptions {
    std::string geojson;
    std::string like;
    std::string out;
    std::string class_property = "class";
    int default_class = 1;
    int background = 0;
    int classes = 0;
    std::optional<double> gsd;
};

struct FuseCommandOptions {
    std::string manifest;
    std::string out;
    std::optional<std::string> predictions;
    std::optional<std::string> truth;
    unsigned jobs = 1;
};

struct StatsOptions {
    std::string manifest;
    std::string truth;
    std::optional<std::string> predictions;
    std::optional<std::string> out;
};

struct CompareOptions {
    std::vector<std::string> rasters;
    SchemeOptions scheme; ///< tile_m drives the EOT scheme, tile_px the pixel baseline
    int zoom = 19;
    std::optional<std::string> out;
    unsigned jobs = 1;
};

int run_tile(const TileOptions& options, Context& ctx);
int run_rasterize(const RasterizeOptions& options, Context& ctx);
int run_fuse(const FuseCommandOptions& options, Context& ctx);
int run_stats(const StatsOptions& options, Context& ctx);
int run_compare(const CompareOptions& options, Context& ctx);

/// Prediction images for `ids`, read from the override directory or the
/// manifest's prediction directory (relative to the manifest file).
PredictionSet load_predictions(const TileManifest& manifest, const std::string& manifest_path,
                               const std::optional<std::string>& override_dir, const std::vector<std::string>& ids);

/// Exit code for a library error raised while processing inputs.
int input_error(Context& ctx, const std::exception& e);

} // namespace eotile::cli
