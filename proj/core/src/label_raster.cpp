#include "eotile/label_raster.hpp"

#include "eotile/error.hpp"
#include "eotile/raster_source.hpp"
#include "eotile/sidecar.hpp"

namespace eotile {

void write_label_raster(const LabelGrid& grid, const RasterMeta& meta, const std::filesystem::path& path)
{
    if (grid.width != meta.extent_px.width || grid.height != meta.extent_px.height)
        throw_invalid("label grid " + std::to_string(grid.width) + "x" + std::to_string(grid.height) +
                      " does not match raster extent " + std::to_string(meta.extent_px.width) + "x" +
                      std::to_string(meta.extent_px.height));
    write_image(path, grid.to_block());
    write_file_text(sidecar_path_for(path), write_sidecar(meta));
}

LabelRaster read_label_raster(const std::filesystem::path& path)
{
    const RasterSource source = RasterSource::open(path);
    return {LabelGrid::from_block(source.pixels()), source.meta()};
}

} // namespace eotile
