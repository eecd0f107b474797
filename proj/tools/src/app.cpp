#include <CLI11.hpp>

#include <filesystem>
#include <ostream>

#include "commands.hpp"
#include "eotile/cli/cli.hpp"
#include "eotile/error.hpp"

namespace eotile::cli {

namespace {

void add_jobs(CLI::App& app, unsigned& jobs)
{
    app.add_option("-j,--jobs", jobs, "Worker threads")->check(CLI::Range(1u, 256u))->capture_default_str();
}

} // namespace

int input_error(Context& ctx, const std::exception& e)
{
    ctx.log.error(e.what());
    return kExitInput;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    Context ctx{out, Log(err)};

    CLI::App app{"Geo-referenced raster tiling, label rasterization and prediction fusion", "eotile"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "eotile 0.1.0");

    TileOptions tile;
    auto* cmd_tile = app.add_subcommand("tile", "Cut rasters into tiles and write a manifest per raster");
    cmd_tile->add_option("rasters", tile.rasters, "Input rasters (GeoTIFF, or PNG/PGM with a sidecar)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_tile->add_option("-o,--output", tile.out_dir, "Output directory")->required();
    add_scheme_options(*cmd_tile, tile.scheme, true);
    cmd_tile->add_option("--format", tile.format, "Tile image format")
        ->check(CLI::IsMember({"png", "pgm"}))
        ->capture_default_str();
    cmd_tile->add_option("--interp", tile.interp, "Resampling when --model-px is given")
        ->check(CLI::IsMember({"bilinear", "nearest"}))
        ->capture_default_str();
    cmd_tile->add_flag("--manifest-only", tile.manifest_only, "Write manifests without tile images");
    add_jobs(*cmd_tile, tile.jobs);

    RasterizeOptions rz;
    auto* cmd_rz = app.add_subcommand("rasterize", "Burn GeoJSON polygons into a label raster");
    cmd_rz->add_option("geojson", rz.geojson, "FeatureCollection of Polygon/MultiPolygon features")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_rz->add_option("--like", rz.like, "Reference raster providing extent and georeference")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_rz->add_option("-o,--output", rz.out, "Output label image (.png or .pgm); a sidecar is written next to it")
        ->required();
    cmd_rz->add_option("--class-property", rz.class_property, "Feature property holding the class id")
        ->capture_default_str();
    cmd_rz->add_option("--default-class", rz.default_class, "Class for features without the property")
        ->check(CLI::Range(0, 254))
        ->capture_default_str();
    cmd_rz->add_option("--background", rz.background, "Label for pixels outside all polygons")->capture_default_str();
    cmd_rz->add_option("--classes", rz.classes, "Number of classes (default: max class + 1)")
        ->check(CLI::Range(0, 255));
    cmd_rz->add_option("--gsd", rz.gsd, "Ground sampling distance override")->check(CLI::PositiveNumber);

    FuseCommandOptions fu;
    auto* cmd_fuse = app.add_subcommand("fuse", "Fuse overlapping tile predictions into one label raster");
    cmd_fuse->add_option("manifest", fu.manifest, "Manifest of the overlapping (stride t/m) tiles")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_fuse->add_option("-o,--output", fu.out, "Fused label image (.png or .pgm)")->required();
    cmd_fuse->add_option("--predictions", fu.predictions, "Prediction directory (default: from the manifest)");
    cmd_fuse->add_option("--truth", fu.truth, "Ground-truth label raster; prints the fused error")
        ->check(CLI::ExistingFile);
    add_jobs(*cmd_fuse, fu.jobs);

    StatsOptions st;
    auto* cmd_stats = app.add_subcommand("stats", "Prediction error against distance to the tile center");
    cmd_stats->add_option("manifest", st.manifest, "Tile manifest")->required()->check(CLI::ExistingFile);
    cmd_stats->add_option("--truth", st.truth, "Ground-truth label raster")->required()->check(CLI::ExistingFile);
    cmd_stats->add_option("--predictions", st.predictions, "Prediction directory (default: from the manifest)");
    cmd_stats->add_option("-o,--output", st.out, "CSV path (default: standard output)");

    CompareOptions cmp;
    auto* cmd_cmp = app.add_subcommand("compare", "Compare pixel, slippy-map and metric tiling schemes");
    cmd_cmp->add_option("rasters", cmp.rasters, "Input rasters")->required()->check(CLI::ExistingFile);
    cmd_cmp->add_option("--tile-m", cmp.scheme.tile_m, "Metric tile extent")->required()->check(CLI::PositiveNumber);
    cmd_cmp->add_option("--tile-px", cmp.scheme.tile_px, "Pixel baseline tile extent (default 256)")
        ->check(CLI::PositiveNumber);
    cmd_cmp->add_option("--zoom", cmp.zoom, "Slippy-map zoom level")
        ->check(CLI::Range(0, 23))
        ->capture_default_str();
    cmd_cmp->add_option("--stride-div", cmp.scheme.stride_div, "Stride divisor of the metric scheme")
        ->check(CLI::Range(1, 64))
        ->capture_default_str();
    cmd_cmp->add_option("--rounding", cmp.scheme.rounding, "Metric scheme rounding")
        ->check(CLI::IsMember({"floor", "ceil"}))
        ->capture_default_str();
    cmd_cmp->add_option("--anchor", cmp.scheme.anchor, "Metric scheme placement")
        ->check(CLI::IsMember({"center", "corner", "raster-center"}))
        ->capture_default_str();
    cmd_cmp->add_option("--gsd", cmp.scheme.gsd, "Ground sampling distance override")->check(CLI::PositiveNumber);
    cmd_cmp->add_flag("--include-partial", cmp.scheme.include_partial,
                      "Keep partial pixel-grid and slippy-map tiles");
    cmd_cmp->add_option("-o,--output", cmp.out, "CSV path (default: standard output)");
    add_jobs(*cmd_cmp, cmp.jobs);

    // The config file belongs to the root app; its keys target the subcommand.
    std::string section;
    for (int k = 1; k < argc; ++k) {
        const std::string a = argv[k];
        if (a.empty() || a[0] == '-') continue;
        section = a;
        break;
    }
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();
    enable_json_config(app, section);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*cmd_tile) return run_tile(tile, ctx);
        if (*cmd_rz) return run_rasterize(rz, ctx);
        if (*cmd_fuse) return run_fuse(fu, ctx);
        if (*cmd_stats) return run_stats(st, ctx);
        if (*cmd_cmp) return run_compare(cmp, ctx);
    } catch (const Error& e) {
        // Argument problems caught before any input is read are usage errors.
        ctx.log.error(e.what());
        return e.code() == ErrorCode::InvalidArgument ? kExitUsage : kExitInput;
    } catch (const std::filesystem::filesystem_error& e) {
        return input_error(ctx, e);
    } catch (const std::exception& e) {
        ctx.log.error(std::string("internal error: ") + e.what());
        return kExitInternal;
    }
    return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    for (const std::string& a : args) argv.push_back(a.c_str());
    argv.push_back(nullptr);
    return run(static_cast<int>(args.size()), argv.data(), out, err);
}

} // namespace eotile::cli
