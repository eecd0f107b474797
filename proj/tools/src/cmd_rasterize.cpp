#include "commands.hpp"
#include "eotile/cli/cli.hpp"
#include "eotile/error.hpp"
#include "eotile/image_io.hpp"
#include "eotile/label_raster.hpp"
#include "eotile/rasterize.hpp"

namespace eotile::cli {

int run_rasterize(const RasterizeOptions& o, Context& ctx)
{
    if (o.background < 0 || o.background > 255) throw_invalid("--background must be in [0, 255]");
    RasterMeta meta = open_raster(o.like, o.gsd).meta();

    GeoJsonOptions gj;
    gj.class_property = o.class_property;
    gj.default_class = o.default_class;
    const std::vector<std::uint8_t> bytes = read_file_bytes(o.geojson);
    const VectorLabelSet labels =
        parse_geojson(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()), gj);
    for (const std::string& w : labels.warnings) ctx.log.warn(o.geojson + ": " + w);

    const LabelGrid grid = rasterize(labels, meta, static_cast<std::uint8_t>(o.background), o.classes);
    meta.nodata = kIgnoreLabel;
    write_label_raster(grid, meta, o.out);
    ctx.log.info(o.geojson + ": " + std::to_string(labels.features.size()) + " features rasterized, " +
                 std::to_string(labels.skipped) + " skipped -> " + o.out);
    return kExitOk;
}

} // namespace eotile::cli
