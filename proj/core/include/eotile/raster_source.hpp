#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "eotile/georef.hpp"
#include "eotile/image_io.hpp"
#include "eotile/scheme.hpp"

namespace eotile {

enum class Interpolation { Bilinear, Nearest };

/// Decoded raster plus georeferencing. Immutable after construction, so
/// concurrent region reads are safe.
class RasterSource {
public:
    RasterSource(RasterMeta meta, PixelBlock pixels);

    /// GeoTIFF (tags, falling back to "<path>.json") or PNG/PGM with a
    /// mandatory sidecar. Throws Error(MissingGeoreference) when neither source
    /// of georeferencing exists.
    static RasterSource open(const std::filesystem::path& path);

    const RasterMeta& meta() const { return meta_; }
    int band_count() const { return pixels_.bands; }
    SampleFormat sample_format() const { return pixels_.format; }
    const PixelBlock& pixels() const { return pixels_; }

    /// Replaces the GSD (e.g. user-supplied for degree-unit CRSs).
    void override_gsd(Vec2 gsd);

    /// Exact window read; samples outside the raster take `pad` and the
    /// block is flagged as padded.
    PixelBlock read_region(const PixelWindow& window, std::uint16_t pad = kDefaultPadValue) const;

private:
    RasterMeta meta_;
    PixelBlock pixels_;
};

/// Tile pixels. Without a model the discretized window is extracted as is.
/// With a model the exact tile rectangle [origin, origin + extent) is resampled
/// to the model input size, consistent with tile_georef's scaling: output
/// pixel k samples raster position origin + (k + 0.5) * extent / n.
PixelBlock read_tile(const RasterSource& source, const TileRef& tile, const std::optional<ModelSpec>& resample_to,
                     Interpolation interpolation = Interpolation::Bilinear, std::uint16_t pad = kDefaultPadValue);

} // namespace eotile
