#include <cstdio>
#include <filesystem>
#include <set>

#include "commands.hpp"
#include "eotile/cli/cli.hpp"
#include "eotile/error.hpp"
#include "eotile/image_io.hpp"
#include "eotile/label_raster.hpp"

namespace eotile::cli {

namespace fs = std::filesystem;

PredictionSet load_predictions(const TileManifest& manifest, const std::string& manifest_path,
                               const std::optional<std::string>& override_dir, const std::vector<std::string>& ids)
{
    fs::path dir = override_dir ? fs::path(*override_dir) : fs::path(manifest.prediction_dir);
    if (!override_dir && dir.is_relative()) dir = fs::path(manifest_path).parent_path() / dir;
    PredictionSet out;
    for (const std::string& id : ids) {
        const fs::path p = dir / (id + "." + manifest.image_format);
        if (!fs::exists(p)) throw Error(ErrorCode::MissingTile, "prediction for tile " + id + " not found: " + p.string());
        out.emplace(id, LabelGrid::from_block(read_image(p)));
    }
    return out;
}

int run_fuse(const FuseCommandOptions& o, Context& ctx)
{
    const TileManifest manifest = read_manifest(o.manifest);
    if (manifest.stride_divisor < 1)
        throw Error(ErrorCode::AlignmentError, o.manifest + ": manifest stride is not tile extent / m");
    const TilingScheme& aux = manifest.scheme;
    const FusionPlan plan = plan_fusion(base_scheme_for(aux), aux);

    std::set<std::string> donor_ids;
    for (const BaseTilePlan& bp : plan.tiles)
        for (const DonorAssignment& d : bp.donors) donor_ids.insert(d.donor.id);
    const PredictionSet predictions =
        load_predictions(manifest, o.manifest, o.predictions, {donor_ids.begin(), donor_ids.end()});

    FuseOptions fo;
    fo.model = manifest.model_input;
    fo.threads = o.jobs;
    const LabelGrid fused = fuse(plan, predictions, fo);

    RasterMeta meta = manifest.raster;
    meta.nodata = kIgnoreLabel;
    write_label_raster(fused, meta, o.out);
    ctx.log.info(o.manifest + ": fused " + std::to_string(plan.tiles.size()) + " base tiles from " +
                 std::to_string(donor_ids.size()) + " predictions (m=" + std::to_string(plan.stride_divisor) +
                 ") -> " + o.out);

    if (o.truth) {
        const LabelRaster truth = read_label_raster(*o.truth);
        if (truth.grid.width != fused.width || truth.grid.height != fused.height)
            throw_invalid(*o.truth + ": ground truth size differs from the raster");
        std::int64_t pixels = 0;
        std::int64_t errors = 0;
        for (std::size_t k = 0; k < fused.data.size(); ++k) {
            if (truth.grid.data[k] == kIgnoreLabel || fused.data[k] == kIgnoreLabel) continue;
            ++pixels;
            errors += fused.data[k] != truth.grid.data[k] ? 1 : 0;
        }
        char line[128];
        std::snprintf(line, sizeof line, "pixels,errors,error_rate\n%lld,%lld,%.6f\n", static_cast<long long>(pixels),
                      static_cast<long long>(errors),
                      pixels > 0 ? static_cast<double>(errors) / static_cast<double>(pixels) : 0.0);
        ctx.out << line;
    }
    return kExitOk;
}

} // namespace eotile::cli
