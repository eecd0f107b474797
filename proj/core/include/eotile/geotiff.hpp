#pragma once

// Classic TIFF (little or big endian) reader limited to what the tiling
// pipeline needs: image structure, GeoTIFF georeferencing tags, and
// uncompressed/deflate 8/16-bit striped or tiled pixel data.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eotile/georef.hpp"
#include "eotile/image_io.hpp"

namespace eotile {

namespace tiff_tag {
inline constexpr std::uint16_t ImageWidth = 256;
inline constexpr std::uint16_t ImageLength = 257;
inline constexpr std::uint16_t BitsPerSample = 258;
inline constexpr std::uint16_t Compression = 259;
inline constexpr std::uint16_t StripOffsets = 273;
inline constexpr std::uint16_t SamplesPerPixel = 277;
inline constexpr std::uint16_t RowsPerStrip = 278;
inline constexpr std::uint16_t StripByteCounts = 279;
inline constexpr std::uint16_t PlanarConfiguration = 284;
inline constexpr std::uint16_t Predictor = 317;
inline constexpr std::uint16_t TileWidth = 322;
inline constexpr std::uint16_t TileLength = 323;
inline constexpr std::uint16_t TileOffsets = 324;
inline constexpr std::uint16_t TileByteCounts = 325;
inline constexpr std::uint16_t SampleFormat = 339;
inline constexpr std::uint16_t ModelPixelScale = 33550;
inline constexpr std::uint16_t ModelTiepoint = 33922;
inline constexpr std::uint16_t ModelTransformation = 34264;
inline constexpr std::uint16_t GeoKeyDirectory = 34735;
inline constexpr std::uint16_t GeoDoubleParams = 34736;
inline constexpr std::uint16_t GeoAsciiParams = 34737;
inline constexpr std::uint16_t GdalNoData = 42113;
} // namespace tiff_tag

namespace geo_key {
inline constexpr std::uint16_t ModelType = 1024;
inline constexpr std::uint16_t RasterType = 1025;
inline constexpr std::uint16_t GeographicType = 2048;
inline constexpr std::uint16_t ProjectedCSType = 3072;
inline constexpr std::uint16_t ProjLinearUnits = 3076;
} // namespace geo_key

struct TiffImageInfo {
    bool little_endian = true;
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::uint16_t bits_per_sample = 8;
    std::uint16_t samples_per_pixel = 1;
    std::uint16_t compression = 1;
    std::uint16_t predictor = 1;
    std::uint16_t planar = 1;
    bool tiled = false;
    std::uint32_t rows_per_strip = 0;
    std::uint32_t tile_width = 0;
    std::uint32_t tile_length = 0;
    std::vector<std::uint64_t> offsets;
    std::vector<std::uint64_t> byte_counts;
};

/// Image structure of the first IFD. Throws ParseError on malformed input.
TiffImageInfo parse_tiff_image_info(std::span<const std::uint8_t> bytes);

/// Georeferencing of the first IFD. ModelTransformation takes precedence over
/// ModelTiepoint + ModelPixelScale. Throws Error(MissingGeoreference) when no
/// transform can be formed and ParseError on malformed input.
RasterMeta parse_geotiff_meta(std::span<const std::uint8_t> bytes);

/// Decodes the pixel data described by `info`. Throws ParseError for
/// unsupported layouts (planar, non-8/16-bit, JPEG/LZW, ...) or corrupt data.
PixelBlock decode_tiff_pixels(std::span<const std::uint8_t> bytes, const TiffImageInfo& info);

} // namespace eotile
