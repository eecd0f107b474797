#pragma once

#include <CLI11.hpp>

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "eotile/georef.hpp"
#include "eotile/raster_source.hpp"
#include "eotile/scheme.hpp"

namespace eotile::cli {

/// Reads `--config` files written as flat JSON objects keyed by long flag
/// names ("tile-m": 75). Values given on the command line take precedence.
/// Items are routed to the subcommand named by `section`.
class JsonConfig : public CLI::Config {
public:
    explicit JsonConfig(std::string section = {}) : section_(std::move(section)) {}

    std::string to_config(const CLI::App* app, bool default_also, bool write_description,
                          std::string prefix) const override;
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override;

private:
    std::string section_;
};

/// Installs --config on the root app for the subcommand `section`.
void enable_json_config(CLI::App& app, const std::string& section);

struct SchemeOptions {
    std::optional<double> tile_m;
    std::optional<std::int64_t> tile_px;
    int stride_div = 1;
    std::string rounding = "floor";
    std::string anchor = "center";
    std::vector<double> anchor_offset;
    std::optional<double> gsd;
    std::optional<std::int64_t> model_px;
    bool include_partial = false;
};

void add_scheme_options(CLI::App& app, SchemeOptions& options, bool with_model);

/// Requested spec (metric or pixel units) from the flags. Throws
/// invalid-argument for bad combinations.
SchemeSpec requested_spec(const SchemeOptions& options);

std::optional<ModelSpec> model_spec(const SchemeOptions& options);

/// Opens a raster and applies a --gsd override. Metric schemes on rasters
/// whose GSD is unknown fail here with a message naming the raster.
RasterSource open_raster(const std::string& path, const std::optional<double>& gsd);

/// Runs job(i) for i in [0, count) on at most `jobs` threads.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& job);

/// Raster id used for output directories: the file stem.
std::string raster_id_for(const std::string& path);

} // namespace eotile::cli
