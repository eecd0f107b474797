#include <filesystem>
#include <set>

#include "commands.hpp"
#include "eotile/cli/cli.hpp"
#include "eotile/error.hpp"
#include "eotile/georef.hpp"
#include "eotile/image_io.hpp"
#include "eotile/manifest.hpp"
#include "eotile/raster_source.hpp"

namespace eotile::cli {

namespace fs = std::filesystem;

namespace {

int tile_one(const TileOptions& o, const SchemeSpec& requested, const std::optional<ModelSpec>& model,
             const std::string& path, Context& ctx)
{
    try {
        const RasterSource src = open_raster(path, o.scheme.gsd);
        if (requested.unit == LengthUnit::Meters && !src.meta().metric_gsd_known())
            throw Error(ErrorCode::MissingGeoreference,
                        path + ": CRS '" + src.meta().crs +
                            "' has degree units; metric tiles need a GSD (sidecar \"gsd\" or --gsd)");
        const SchemeSpec px = to_pixel_spec(requested, src.meta().gsd);
        if (px.tile_extent.x < 1 || px.tile_extent.y < 1)
            throw Error(ErrorCode::InvalidArgument,
                        path + ": tile extent is below one pixel (" + std::to_string(px.tile_extent.x) + " x " +
                            std::to_string(px.tile_extent.y) + " px); check the GSD and transform");
        const std::string id = raster_id_for(path);
        TileManifest manifest = TileManifest::create(id, src.meta(), requested, o.scheme.stride_div, model);
        manifest.image_format = o.format;

        const fs::path dir = fs::path(o.out_dir) / id;
        fs::create_directories(dir);
        if (!o.manifest_only) {
            const fs::path tiles = dir / manifest.tile_dir;
            fs::remove_all(tiles);
            fs::create_directories(tiles);
            const Interpolation interp = o.interp == "nearest" ? Interpolation::Nearest : Interpolation::Bilinear;
            for (const ManifestTile& t : manifest.tiles)
                write_image(tiles / (t.tile.id + "." + o.format), read_tile(src, t.tile, model, interp));
        }
        write_manifest(manifest, dir / "manifest.json");
        ctx.log.info(path + ": " + std::to_string(manifest.tiles.size()) + " tiles (" +
                     std::to_string(manifest.scheme.counts.x) + "x" + std::to_string(manifest.scheme.counts.y) +
                     ") -> " + (dir / "manifest.json").string());
        return kExitOk;
    } catch (const Error& e) {
        std::string msg = e.what();
        if (msg.find(path) == std::string::npos) msg = path + ": " + msg;
        ctx.log.error(msg);
        return kExitInput;
    } catch (const fs::filesystem_error& e) {
        ctx.log.error(path + ": " + e.what());
        return kExitInput;
    } catch (const std::exception& e) {
        ctx.log.error(path + ": internal error: " + e.what());
        return kExitInternal;
    }
}

} // namespace

int run_tile(const TileOptions& o, Context& ctx)
{
    const SchemeSpec requested = requested_spec(o.scheme);
    const std::optional<ModelSpec> model = model_spec(o.scheme);

    std::set<std::string> ids;
    for (const std::string& r : o.rasters)
        if (!ids.insert(raster_id_for(r)).second)
            throw_invalid("two inputs share the raster id '" + raster_id_for(r) + "'");

    std::vector<int> codes(o.rasters.size(), kExitOk);
    parallel_for(o.rasters.size(), o.jobs,
                 [&](std::size_t i) { codes[i] = tile_one(o, requested, model, o.rasters[i], ctx); });

    int worst = kExitOk;
    std::size_t failed = 0;
    for (int c : codes) {
        if (c != kExitOk) ++failed;
        worst = std::max(worst, c);
    }
    if (failed > 0)
        ctx.log.warn(std::to_string(failed) + " of " + std::to_string(codes.size()) + " rasters failed");
    return worst;
}

} // namespace eotile::cli
