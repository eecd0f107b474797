#include "commands.hpp"
#include "eotile/cli/cli.hpp"
#include "eotile/error.hpp"
#include "eotile/error_stats.hpp"
#include "eotile/image_io.hpp"
#include "eotile/label_raster.hpp"

namespace eotile::cli {

int run_stats(const StatsOptions& o, Context& ctx)
{
    const TileManifest manifest = read_manifest(o.manifest);
    const LabelRaster truth = read_label_raster(o.truth);
    if (truth.grid.width != manifest.raster.extent_px.width || truth.grid.height != manifest.raster.extent_px.height)
        throw_invalid(o.truth + ": ground truth size differs from the manifest raster");

    std::vector<TileRef> tiles;
    std::vector<std::string> ids;
    for (const ManifestTile& t : manifest.tiles) {
        tiles.push_back(t.tile);
        ids.push_back(t.tile.id);
    }
    const PredictionSet predictions = load_predictions(manifest, o.manifest, o.predictions, ids);
    const std::vector<ErrorBin> bins = error_vs_center_distance(tiles, predictions, truth.grid, manifest.model_input);
    const std::string csv = error_table_csv(bins);
    if (o.out) {
        write_file_text(*o.out, csv);
        ctx.log.info(o.manifest + ": " + std::to_string(bins.size()) + " distance bins -> " + *o.out);
    } else {
        ctx.out << csv;
    }
    return kExitOk;
}

} // namespace eotile::cli
