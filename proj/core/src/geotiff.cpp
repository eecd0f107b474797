#include "eotile/geotiff.hpp"

#include <zlib.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <map>

#include "eotile/error.hpp"

namespace eotile {

namespace {

// Upper bound on decoded pixel buffer size; guards against hostile headers.
constexpr std::uint64_t kMaxDecodedBytes = std::uint64_t{1} << 32;
constexpr std::uint64_t kMaxTagValues = std::uint64_t{1} << 26;

class ByteReader {
public:
    ByteReader(std::span<const std::uint8_t> bytes, bool little) : bytes_(bytes), little_(little) {}

    std::size_t size() const { return bytes_.size(); }

    void require(std::uint64_t offset, std::uint64_t length, const char* what) const
    {
        if (offset > bytes_.size() || length > bytes_.size() - offset)
            throw ParseError(std::string("tiff: ") + what + " extends past end of file",
                             static_cast<std::size_t>(std::min<std::uint64_t>(offset, bytes_.size())));
    }

    std::uint16_t u16(std::uint64_t off) const
    {
        require(off, 2, "16-bit value");
        const std::uint8_t* p = bytes_.data() + off;
        return little_ ? static_cast<std::uint16_t>(p[0] | (p[1] << 8)) : static_cast<std::uint16_t>((p[0] << 8) | p[1]);
    }

    std::uint32_t u32(std::uint64_t off) const
    {
        require(off, 4, "32-bit value");
        const std::uint8_t* p = bytes_.data() + off;
        return little_ ? (std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 | std::uint32_t{p[2]} << 16 |
                          std::uint32_t{p[3]} << 24)
                       : (std::uint32_t{p[0]} << 24 | std::uint32_t{p[1]} << 16 | std::uint32_t{p[2]} << 8 |
                          std::uint32_t{p[3]});
    }

    std::uint64_t u64(std::uint64_t off) const
    {
        const std::uint64_t a = u32(off);
        const std::uint64_t b = u32(off + 4);
        return little_ ? (a | b << 32) : (a << 32 | b);
    }

    double f64(std::uint64_t off) const
    {
        const std::uint64_t bits = u64(off);
        double d;
        std::memcpy(&d, &bits, sizeof d);
        return d;
    }

    float f32(std::uint64_t off) const
    {
        const std::uint32_t bits = u32(off);
        float f;
        std::memcpy(&f, &bits, sizeof f);
        return f;
    }

    std::span<const std::uint8_t> slice(std::uint64_t off, std::uint64_t len) const
    {
        require(off, len, "data block");
        return bytes_.subspan(static_cast<std::size_t>(off), static_cast<std::size_t>(len));
    }

private:
    std::span<const std::uint8_t> bytes_;
    bool little_;
};

std::uint64_t type_size(std::uint16_t type)
{
    switch (type) {
    case 1: case 2: case 6: case 7: return 1;
    case 3: case 8: return 2;
    case 4: case 9: case 11: return 4;
    case 5: case 10: case 12: return 8;
    default: return 0;
    }
}

struct Entry {
    std::uint16_t tag = 0;
    std::uint16_t type = 0;
    std::uint64_t count = 0;
    std::uint64_t data_offset = 0; ///< absolute position of the value bytes
    std::uint64_t entry_offset = 0;
};

class Directory {
public:
    explicit Directory(std::span<const std::uint8_t> bytes) : little_(detect_order(bytes)), reader_(bytes, little_)
    {
        if (reader_.u16(2) != 42) throw ParseError("tiff: bad magic number (BigTIFF is not supported)", 2);
        const std::uint64_t ifd = reader_.u32(4);
        if (ifd < 8) throw ParseError("tiff: IFD offset points into the header", 4);
        if (ifd + 2 > reader_.size()) throw ParseError("tiff: IFD offset points past the end of file", 4);
        const std::uint16_t n = reader_.u16(ifd);
        if (n == 0) throw ParseError("tiff: empty IFD", static_cast<std::size_t>(ifd));
        reader_.require(ifd + 2, std::uint64_t{n} * 12, "IFD entries");
        for (std::uint16_t k = 0; k < n; ++k) {
            const std::uint64_t at = ifd + 2 + std::uint64_t{k} * 12;
            Entry e;
            e.entry_offset = at;
            e.tag = reader_.u16(at);
            e.type = reader_.u16(at + 2);
            e.count = reader_.u32(at + 4);
            const std::uint64_t size = type_size(e.type);
            if (size == 0) continue; // unknown types are skippable per TIFF 6.0
            if (e.count > kMaxTagValues) throw ParseError("tiff: tag value count too large", at + 4);
            const std::uint64_t total = size * e.count;
            e.data_offset = total <= 4 ? at + 8 : reader_.u32(at + 8);
            reader_.require(e.data_offset, total, "tag data");
            entries_[e.tag] = e;
        }
    }

    const ByteReader& reader() const { return reader_; }
    bool little_endian() const { return little_; }

    const Entry* find(std::uint16_t tag) const
    {
        auto it = entries_.find(tag);
        return it == entries_.end() ? nullptr : &it->second;
    }

    std::vector<std::uint64_t> integers(const Entry& e) const
    {
        std::vector<std::uint64_t> out;
        out.reserve(static_cast<std::size_t>(e.count));
        for (std::uint64_t i = 0; i < e.count; ++i) {
            switch (e.type) {
            case 1: case 7: out.push_back(reader_.slice(e.data_offset + i, 1)[0]); break;
            case 3: out.push_back(reader_.u16(e.data_offset + 2 * i)); break;
            case 4: out.push_back(reader_.u32(e.data_offset + 4 * i)); break;
            default:
                throw ParseError("tiff: tag " + std::to_string(e.tag) + " must be an unsigned integer type",
                                 static_cast<std::size_t>(e.entry_offset));
            }
        }
        return out;
    }

    std::uint64_t integer(std::uint16_t tag, std::uint64_t fallback) const
    {
        const Entry* e = find(tag);
        if (!e) return fallback;
        if (e->count == 0) throw ParseError("tiff: tag " + std::to_string(tag) + " has no values",
                                            static_cast<std::size_t>(e->entry_offset));
        return integers(*e).front();
    }

    std::vector<double> doubles(const Entry& e) const
    {
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(e.count));
        for (std::uint64_t i = 0; i < e.count; ++i) {
            switch (e.type) {
            case 12: out.push_back(reader_.f64(e.data_offset + 8 * i)); break;
            case 11: out.push_back(reader_.f32(e.data_offset + 4 * i)); break;
            case 5: {
                const double num = reader_.u32(e.data_offset + 8 * i);
                const double den = reader_.u32(e.data_offset + 8 * i + 4);
                out.push_back(den == 0 ? 0.0 : num / den);
                break;
            }
            case 3: out.push_back(reader_.u16(e.data_offset + 2 * i)); break;
            case 4: out.push_back(reader_.u32(e.data_offset + 4 * i)); break;
            default:
                throw ParseError("tiff: tag " + std::to_string(e.tag) + " must be numeric",
                                 static_cast<std::size_t>(e.entry_offset));
            }
        }
        return out;
    }

    std::string ascii(const Entry& e) const
    {
        if (e.type != 2) throw ParseError("tiff: tag " + std::to_string(e.tag) + " must be ASCII",
                                          static_cast<std::size_t>(e.entry_offset));
        const auto s = reader_.slice(e.data_offset, e.count);
        std::string out(s.begin(), s.end());
        while (!out.empty() && out.back() == '\0') out.pop_back();
        return out;
    }

private:
    static bool detect_order(std::span<const std::uint8_t> bytes)
    {
        if (bytes.size() < 8) throw ParseError("tiff: file shorter than header", bytes.size());
        if (bytes[0] == 'I' && bytes[1] == 'I') return true;
        if (bytes[0] == 'M' && bytes[1] == 'M') return false;
        throw ParseError("tiff: bad byte-order mark", 0);
    }

    bool little_;
    ByteReader reader_;
    std::map<std::uint16_t, Entry> entries_;
};

struct GeoKeys {
    std::map<std::uint16_t, std::uint16_t> values;
};

GeoKeys read_geokeys(const Directory& dir)
{
    GeoKeys keys;
    const Entry* e = dir.find(tiff_tag::GeoKeyDirectory);
    if (!e) return keys;
    const std::vector<std::uint64_t> raw = dir.integers(*e);
    if (raw.size() < 4) throw ParseError("geotiff: key directory header truncated", e->data_offset);
    const std::uint64_t n = raw[3];
    if (raw.size() < 4 + 4 * n) throw ParseError("geotiff: key directory shorter than declared", e->data_offset);
    for (std::uint64_t k = 0; k < n; ++k) {
        const std::uint64_t* key = &raw[4 + 4 * k];
        // Only inline SHORT values (location 0) carry the codes we need.
        if (key[1] == 0) keys.values[static_cast<std::uint16_t>(key[0])] = static_cast<std::uint16_t>(key[3]);
    }
    return keys;
}

std::optional<std::uint16_t> key(const GeoKeys& keys, std::uint16_t id)
{
    auto it = keys.values.find(id);
    if (it == keys.values.end()) return std::nullopt;
    return it->second;
}

void require_finite(const std::vector<double>& v, const Entry& e)
{
    for (double d : v)
        if (!std::isfinite(d)) throw ParseError("geotiff: non-finite value in tag " + std::to_string(e.tag),
                                                static_cast<std::size_t>(e.data_offset));
}

} // namespace

TiffImageInfo parse_tiff_image_info(std::span<const std::uint8_t> bytes)
{
    const Directory dir(bytes);
    TiffImageInfo info;
    info.little_endian = bytes[0] == 'I';
    info.width = static_cast<std::uint32_t>(dir.integer(tiff_tag::ImageWidth, 0));
    info.height = static_cast<std::uint32_t>(dir.integer(tiff_tag::ImageLength, 0));
    if (info.width == 0 || info.height == 0) throw ParseError("tiff: missing or zero image size", 8);
    info.bits_per_sample = static_cast<std::uint16_t>(dir.integer(tiff_tag::BitsPerSample, 1));
    info.samples_per_pixel = static_cast<std::uint16_t>(dir.integer(tiff_tag::SamplesPerPixel, 1));
    info.compression = static_cast<std::uint16_t>(dir.integer(tiff_tag::Compression, 1));
    info.predictor = static_cast<std::uint16_t>(dir.integer(tiff_tag::Predictor, 1));
    info.planar = static_cast<std::uint16_t>(dir.integer(tiff_tag::PlanarConfiguration, 1));

    const Entry* tile_offsets = dir.find(tiff_tag::TileOffsets);
    const Entry* offsets = tile_offsets ? tile_offsets : dir.find(tiff_tag::StripOffsets);
    const Entry* counts = dir.find(tile_offsets ? tiff_tag::TileByteCounts : tiff_tag::StripByteCounts);
    if (!offsets || !counts) throw ParseError("tiff: missing strip/tile offsets or byte counts", 8);
    info.tiled = tile_offsets != nullptr;
    info.offsets = dir.integers(*offsets);
    info.byte_counts = dir.integers(*counts);
    if (info.offsets.size() != info.byte_counts.size())
        throw ParseError("tiff: offset and byte count arrays differ in length", counts->entry_offset);
    if (info.tiled) {
        info.tile_width = static_cast<std::uint32_t>(dir.integer(tiff_tag::TileWidth, 0));
        info.tile_length = static_cast<std::uint32_t>(dir.integer(tiff_tag::TileLength, 0));
        if (info.tile_width == 0 || info.tile_length == 0) throw ParseError("tiff: zero tile size", 8);
    } else {
        info.rows_per_strip = static_cast<std::uint32_t>(
            std::min<std::uint64_t>(dir.integer(tiff_tag::RowsPerStrip, info.height), info.height));
        if (info.rows_per_strip == 0) throw ParseError("tiff: zero RowsPerStrip", 8);
    }
    return info;
}

RasterMeta parse_geotiff_meta(std::span<const std::uint8_t> bytes)
{
    const Directory dir(bytes);
    RasterMeta meta;
    meta.extent_px.width = static_cast<std::int64_t>(dir.integer(tiff_tag::ImageWidth, 0));
    meta.extent_px.height = static_cast<std::int64_t>(dir.integer(tiff_tag::ImageLength, 0));
    if (meta.extent_px.width == 0 || meta.extent_px.height == 0)
        throw ParseError("tiff: missing or zero image size", 8);

    const Entry* matrix = dir.find(tiff_tag::ModelTransformation);
    const Entry* scale = dir.find(tiff_tag::ModelPixelScale);
    const Entry* tiepoint = dir.find(tiff_tag::ModelTiepoint);

    GeoTransform gt;
    if (matrix) {
        const std::vector<double> m = dir.doubles(*matrix);
        if (m.size() < 16) throw ParseError("geotiff: ModelTransformation needs 16 values", matrix->data_offset);
        require_finite(m, *matrix);
        gt.scale = {m[0], m[5]};
        gt.skew = {m[1], m[4]};
        gt.origin = {m[3], m[7]};
    } else if (scale && tiepoint) {
        const std::vector<double> s = dir.doubles(*scale);
        const std::vector<double> tp = dir.doubles(*tiepoint);
        if (s.size() < 2) throw ParseError("geotiff: ModelPixelScale needs 2 values", scale->data_offset);
        if (tp.size() < 6) throw ParseError("geotiff: ModelTiepoint needs 6 values", tiepoint->data_offset);
        require_finite(s, *scale);
        require_finite(tp, *tiepoint);
        gt.scale = {s[0], -s[1]};
        gt.origin = {tp[3] - tp[0] * s[0], tp[4] + tp[1] * s[1]};
    } else {
        throw Error(ErrorCode::MissingGeoreference,
                    "tiff has neither ModelTransformation nor ModelPixelScale + ModelTiepoint");
    }
    if (!gt.invertible()) throw ParseError("geotiff: degenerate georeferencing transform",
                                           matrix ? matrix->data_offset : scale->data_offset);

    const GeoKeys keys = read_geokeys(dir);
    // PixelIsPoint references pixel centers; shift to the corner convention.
    if (key(keys, geo_key::RasterType) == 2) gt.origin = gt.origin - Vec2{gt.scale.x + gt.skew.x, gt.skew.y + gt.scale.y} * 0.5;
    meta.geotransform = gt;
    meta.gsd = gsd_from_transform(gt);

    const auto projected = key(keys, geo_key::ProjectedCSType);
    const auto geographic = key(keys, geo_key::GeographicType);
    const auto model = key(keys, geo_key::ModelType);
    if (projected && *projected != 32767 && *projected != 0) {
        meta.crs = "EPSG:" + std::to_string(*projected);
    } else if (geographic && *geographic != 32767 && *geographic != 0 && model != 1) {
        meta.crs = "EPSG:" + std::to_string(*geographic);
    } else if (projected || geographic) {
        meta.crs = "user-defined";
    }
    if (const auto units = key(keys, geo_key::ProjLinearUnits)) {
        meta.units = *units == 9001 ? CrsUnits::Meters : CrsUnits::Unknown;
    } else if (model == 2) {
        meta.units = CrsUnits::Degrees;
    } else {
        meta.units = infer_crs_units(meta.crs);
    }

    if (const Entry* nodata = dir.find(tiff_tag::GdalNoData)) {
        const std::string text = dir.ascii(*nodata);
        try {
            std::size_t used = 0;
            const double v = std::stod(text, &used);
            if (v == std::floor(v) && v >= 0 && v <= 65535) meta.nodata = static_cast<int>(v);
        } catch (const std::exception&) {
            // non-numeric nodata (e.g. "nan") is irrelevant for integer rasters
        }
    }
    return meta;
}

namespace {

void inflate_block(std::span<const std::uint8_t> in, std::vector<std::uint8_t>& out, std::uint64_t where)
{
    z_stream zs{};
    if (inflateInit(&zs) != Z_OK) throw ParseError("tiff: zlib init failed", where);
    zs.next_in = const_cast<Bytef*>(in.data());
    zs.avail_in = static_cast<uInt>(in.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = inflate(&zs, Z_FINISH);
    inflateEnd(&zs);
    // Truncated streams shorter than expected are padded with zeros; real
    // corruption is an error.
    if (rc != Z_STREAM_END && rc != Z_BUF_ERROR && rc != Z_OK) throw ParseError("tiff: corrupt deflate data", where);
}

void undo_predictor(std::vector<std::uint8_t>& block, std::uint64_t width, std::uint64_t rows, int spp, int bps,
                    bool little)
{
    const std::uint64_t row_samples = width * static_cast<std::uint64_t>(spp);
    for (std::uint64_t r = 0; r < rows; ++r) {
        if (bps == 8) {
            std::uint8_t* p = block.data() + r * row_samples;
            for (std::uint64_t k = static_cast<std::uint64_t>(spp); k < row_samples; ++k)
                p[k] = static_cast<std::uint8_t>(p[k] + p[k - static_cast<std::uint64_t>(spp)]);
        } else {
            std::uint8_t* p = block.data() + r * row_samples * 2;
            auto get = [&](std::uint64_t k) -> std::uint16_t {
                return little ? static_cast<std::uint16_t>(p[2 * k] | (p[2 * k + 1] << 8))
                              : static_cast<std::uint16_t>((p[2 * k] << 8) | p[2 * k + 1]);
            };
            auto put = [&](std::uint64_t k, std::uint16_t v) {
                if (little) {
                    p[2 * k] = static_cast<std::uint8_t>(v & 0xff);
                    p[2 * k + 1] = static_cast<std::uint8_t>(v >> 8);
                } else {
                    p[2 * k] = static_cast<std::uint8_t>(v >> 8);
                    p[2 * k + 1] = static_cast<std::uint8_t>(v & 0xff);
                }
            };
            for (std::uint64_t k = static_cast<std::uint64_t>(spp); k < row_samples; ++k)
                put(k, static_cast<std::uint16_t>(get(k) + get(k - static_cast<std::uint64_t>(spp))));
        }
    }
}

} // namespace

PixelBlock decode_tiff_pixels(std::span<const std::uint8_t> bytes, const TiffImageInfo& info)
{
    if (info.bits_per_sample != 8 && info.bits_per_sample != 16)
        throw ParseError("tiff: only 8- and 16-bit samples are supported", 0);
    if (info.samples_per_pixel == 0 || info.samples_per_pixel > 16) throw ParseError("tiff: bad SamplesPerPixel", 0);
    if (info.planar != 1 && info.samples_per_pixel > 1)
        throw ParseError("tiff: planar-separate layout is not supported", 0);
    const bool deflate = info.compression == 8 || info.compression == 32946;
    if (info.compression != 1 && !deflate)
        throw ParseError("tiff: compression " + std::to_string(info.compression) +
                             " is not supported (convert to uncompressed or deflate)",
                         0);
    if (info.predictor != 1 && info.predictor != 2) throw ParseError("tiff: unsupported predictor", 0);

    const int spp = info.samples_per_pixel;
    const int bps = info.bits_per_sample;
    const std::uint64_t bytes_per_sample = static_cast<std::uint64_t>(bps / 8);
    const double total = static_cast<double>(info.width) * info.height * spp * static_cast<double>(bytes_per_sample);
    if (total > static_cast<double>(kMaxDecodedBytes)) throw ParseError("tiff: image too large", 0);
    // Deflate expands by at most ~1032x; uncompressed data must be in the file.
    const double plausible = 65536.0 + static_cast<double>(bytes.size()) * (deflate ? 1100.0 : 1.0);
    if (total > plausible) throw ParseError("tiff: declared image size exceeds the data in the file", 0);

    const std::uint64_t block_w = info.tiled ? info.tile_width : info.width;
    const std::uint64_t block_h = info.tiled ? info.tile_length : info.rows_per_strip;
    const std::uint64_t across = (info.width + block_w - 1) / block_w;
    const std::uint64_t down = (info.height + block_h - 1) / block_h;
    if (info.offsets.size() < across * down) throw ParseError("tiff: fewer strips/tiles than the image requires", 0);
    if (static_cast<double>(block_w) * static_cast<double>(block_h) * spp * static_cast<double>(bytes_per_sample) >
        static_cast<double>(kMaxDecodedBytes))
        throw ParseError("tiff: strip/tile too large", 0);
    if (static_cast<double>(block_w) * static_cast<double>(block_h) * spp * static_cast<double>(bytes_per_sample) >
        plausible)
        throw ParseError("tiff: declared strip/tile size exceeds the data in the file", 0);
    const std::uint64_t block_bytes = block_w * block_h * spp * bytes_per_sample;

    PixelBlock out = PixelBlock::filled(info.width, info.height, spp,
                                        bps == 16 ? SampleFormat::UInt16 : SampleFormat::UInt8, 0);
    const ByteReader reader(bytes, info.little_endian);
    std::vector<std::uint8_t> buf;
    for (std::uint64_t by = 0; by < down; ++by) {
        for (std::uint64_t bx = 0; bx < across; ++bx) {
            const std::uint64_t k = by * across + bx;
            const std::span<const std::uint8_t> src = reader.slice(info.offsets[k], info.byte_counts[k]);
            buf.assign(static_cast<std::size_t>(block_bytes), 0);
            if (deflate) {
                inflate_block(src, buf, info.offsets[k]);
            } else {
                std::memcpy(buf.data(), src.data(), std::min<std::size_t>(src.size(), buf.size()));
            }
            if (info.predictor == 2) undo_predictor(buf, block_w, block_h, spp, bps, info.little_endian);

            const std::uint64_t x0 = bx * block_w;
            const std::uint64_t y0 = by * block_h;
            const std::uint64_t w = std::min<std::uint64_t>(block_w, info.width - x0);
            const std::uint64_t h = std::min<std::uint64_t>(block_h, info.height - y0);
            for (std::uint64_t r = 0; r < h; ++r) {
                for (std::uint64_t c = 0; c < w * spp; ++c) {
                    const std::uint64_t s = (r * block_w * spp + c) * bytes_per_sample;
                    std::uint16_t v = buf[s];
                    if (bps == 16)
                        v = info.little_endian ? static_cast<std::uint16_t>(buf[s] | (buf[s + 1] << 8))
                                               : static_cast<std::uint16_t>((buf[s] << 8) | buf[s + 1]);
                    out.samples[static_cast<std::size_t>(((y0 + r) * info.width + x0) * spp + c)] = v;
                }
            }
        }
    }
    return out;
}

} // namespace eotile
