#include "eotile/raster_source.hpp"

#include <cctype>
#include <cmath>

#include "eotile/error.hpp"
#include "eotile/geotiff.hpp"
#include "eotile/sidecar.hpp"

namespace eotile {

namespace {

std::string lower_extension(const std::filesystem::path& path)
{
    std::string ext = path.extension().string();
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext;
}

RasterMeta sidecar_or_throw(const std::filesystem::path& path, const std::string& reason)
{
    const auto sidecar = sidecar_path_for(path);
    if (!std::filesystem::exists(sidecar))
        throw Error(ErrorCode::MissingGeoreference, path.string() + ": " + reason + " and no sidecar " +
                                                        sidecar.filename().string());
    return read_sidecar_file(sidecar);
}

void grow(PixelWindow& valid, std::int64_t x, std::int64_t y)
{
    if (valid.empty()) {
        valid = {x, y, x + 1, y + 1};
        return;
    }
    valid = {std::min(valid.x0, x), std::min(valid.y0, y), std::max(valid.x1, x + 1), std::max(valid.y1, y + 1)};
}

} // namespace

RasterSource::RasterSource(RasterMeta meta, PixelBlock pixels) : meta_(std::move(meta)), pixels_(std::move(pixels))
{
    meta_.validate();
    if (pixels_.width != meta_.extent_px.width || pixels_.height != meta_.extent_px.height)
        throw_invalid("pixel data " + std::to_string(pixels_.width) + "x" + std::to_string(pixels_.height) +
                      " does not match metadata extent " + std::to_string(meta_.extent_px.width) + "x" +
                      std::to_string(meta_.extent_px.height));
}

RasterSource RasterSource::open(const std::filesystem::path& path)
{
    const std::string ext = lower_extension(path);
    if (ext == ".tif" || ext == ".tiff") {
        const std::vector<std::uint8_t> bytes = read_file_bytes(path);
        const TiffImageInfo info = parse_tiff_image_info(bytes);
        PixelBlock pixels = decode_tiff_pixels(bytes, info);
        RasterMeta meta;
        try {
            meta = parse_geotiff_meta(bytes);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::MissingGeoreference) throw;
            meta = sidecar_or_throw(path, "no GeoTIFF georeferencing tags");
        }
        return RasterSource(std::move(meta), std::move(pixels));
    }
    PixelBlock pixels = read_image(path);
    return RasterSource(sidecar_or_throw(path, "image formats without geo tags need a sidecar"), std::move(pixels));
}

void RasterSource::override_gsd(Vec2 gsd)
{
    if (!(gsd.x > 0) || !(gsd.y > 0)) throw_invalid("gsd override must be positive");
    meta_.gsd = gsd;
    meta_.gsd_explicit = true;
}

PixelBlock RasterSource::read_region(const PixelWindow& window, std::uint16_t pad) const
{
    PixelBlock out = PixelBlock::filled(window.width(), window.height(), pixels_.bands, pixels_.format, pad);
    const PixelWindow inside = window.intersect({0, 0, pixels_.width, pixels_.height});
    out.valid = inside.empty() ? PixelWindow{}
                               : PixelWindow{inside.x0 - window.x0, inside.y0 - window.y0, inside.x1 - window.x0,
                                             inside.y1 - window.y0};
    out.padded = inside.area() != window.area();
    const std::size_t row = static_cast<std::size_t>(inside.width() * pixels_.bands);
    for (std::int64_t y = inside.y0; y < inside.y1; ++y) {
        const auto* src = &pixels_.samples[pixels_.index(inside.x0, y)];
        auto* dst = &out.samples[out.index(inside.x0 - window.x0, y - window.y0)];
        std::copy(src, src + row, dst);
    }
    return out;
}

PixelBlock read_tile(const RasterSource& source, const TileRef& tile, const std::optional<ModelSpec>& resample_to,
                     Interpolation interpolation, std::uint16_t pad)
{
    if (!resample_to) return source.read_region(tile.window, pad);
    if (resample_to->width <= 0 || resample_to->height <= 0) throw_invalid("model input size must be positive");

    const PixelBlock& src = source.pixels();
    const std::int64_t rw = src.width;
    const std::int64_t rh = src.height;
    const int bands = src.bands;
    const Vec2 factor{tile.extent_px.x / static_cast<double>(resample_to->width),
                      tile.extent_px.y / static_cast<double>(resample_to->height)};

    PixelBlock out = PixelBlock::filled(resample_to->width, resample_to->height, bands, src.format, pad);
    out.valid = {};
    const double max_value = src.format == SampleFormat::UInt16 ? 65535.0 : 255.0;

    for (std::int64_t k = 0; k < out.height; ++k) {
        const double sy = tile.origin_px.y + (static_cast<double>(k) + 0.5) * factor.y;
        for (std::int64_t l = 0; l < out.width; ++l) {
            const double sx = tile.origin_px.x + (static_cast<double>(l) + 0.5) * factor.x;
            if (sx < 0.0 || sy < 0.0 || sx >= static_cast<double>(rw) || sy >= static_cast<double>(rh)) {
                out.padded = true;
                continue;
            }
            grow(out.valid, l, k);
            if (interpolation == Interpolation::Nearest) {
                const auto px = static_cast<std::int64_t>(sx);
                const auto py = static_cast<std::int64_t>(sy);
                for (int b = 0; b < bands; ++b) out.set(l, k, b, src.at(px, py, b));
                continue;
            }
            // Bilinear between pixel centers; neighbours clamp to the raster
            // edge so constant regions stay constant up to the border.
            const double u = sx - 0.5;
            const double v = sy - 0.5;
            const double fx0 = std::floor(u);
            const double fy0 = std::floor(v);
            const double ax = u - fx0;
            const double ay = v - fy0;
            const std::int64_t x0 = std::clamp<std::int64_t>(static_cast<std::int64_t>(fx0), 0, rw - 1);
            const std::int64_t x1 = std::clamp<std::int64_t>(static_cast<std::int64_t>(fx0) + 1, 0, rw - 1);
            const std::int64_t y0 = std::clamp<std::int64_t>(static_cast<std::int64_t>(fy0), 0, rh - 1);
            const std::int64_t y1 = std::clamp<std::int64_t>(static_cast<std::int64_t>(fy0) + 1, 0, rh - 1);
            for (int b = 0; b < bands; ++b) {
                const double top = (1 - ax) * src.at(x0, y0, b) + ax * src.at(x1, y0, b);
                const double bottom = (1 - ax) * src.at(x0, y1, b) + ax * src.at(x1, y1, b);
                const double value = std::clamp(std::round((1 - ay) * top + ay * bottom), 0.0, max_value);
                out.set(l, k, b, static_cast<std::uint16_t>(value));
            }
        }
    }
    return out;
}

} // namespace eotile
