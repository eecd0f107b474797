#include "tiff_writer.hpp"

#include <zlib.h>

#include <cstring>
#include <map>
#include <stdexcept>

namespace eotile::testing {

namespace {

class Sink {
public:
    explicit Sink(bool le) : le_(le) {}

    void u8(std::uint8_t v) { bytes.push_back(v); }
    void u16(std::uint16_t v)
    {
        if (le_) {
            u8(v & 0xff);
            u8(v >> 8);
        } else {
            u8(v >> 8);
            u8(v & 0xff);
        }
    }
    void u32(std::uint32_t v)
    {
        if (le_) {
            u16(v & 0xffff);
            u16(v >> 16);
        } else {
            u16(v >> 16);
            u16(v & 0xffff);
        }
    }
    void f64(double d)
    {
        std::uint64_t v;
        std::memcpy(&v, &d, 8);
        if (le_) {
            u32(static_cast<std::uint32_t>(v));
            u32(static_cast<std::uint32_t>(v >> 32));
        } else {
            u32(static_cast<std::uint32_t>(v >> 32));
            u32(static_cast<std::uint32_t>(v));
        }
    }
    void patch32(std::size_t at, std::uint32_t v)
    {
        Sink s(le_);
        s.u32(v);
        std::memcpy(bytes.data() + at, s.bytes.data(), 4);
    }
    void align() { if (bytes.size() % 2) u8(0); }

    std::vector<std::uint8_t> bytes;

private:
    bool le_;
};

struct Entry {
    TiffType type;
    std::uint32_t count;
    std::vector<std::uint8_t> data; ///< already in file byte order
};

std::size_t type_size(TiffType t)
{
    switch (t) {
    case TiffType::Byte:
    case TiffType::Ascii: return 1;
    case TiffType::Short: return 2;
    case TiffType::Long: return 4;
    case TiffType::Double: return 8;
    }
    return 1;
}

Entry make(bool le, TiffType type, const std::vector<std::uint64_t>& values)
{
    Sink s(le);
    for (std::uint64_t v : values) {
        switch (type) {
        case TiffType::Byte:
        case TiffType::Ascii: s.u8(static_cast<std::uint8_t>(v)); break;
        case TiffType::Short: s.u16(static_cast<std::uint16_t>(v)); break;
        case TiffType::Long: s.u32(static_cast<std::uint32_t>(v)); break;
        case TiffType::Double: throw std::logic_error("use make_doubles");
        }
    }
    return {type, static_cast<std::uint32_t>(values.size()), std::move(s.bytes)};
}

Entry make_doubles(bool le, const std::vector<double>& values)
{
    Sink s(le);
    for (double v : values) s.f64(v);
    return {TiffType::Double, static_cast<std::uint32_t>(values.size()), std::move(s.bytes)};
}

Entry make_ascii(const std::string& text)
{
    std::vector<std::uint8_t> d(text.begin(), text.end());
    d.push_back(0);
    return {TiffType::Ascii, static_cast<std::uint32_t>(d.size()), std::move(d)};
}

std::vector<std::uint8_t> deflate(const std::vector<std::uint8_t>& raw)
{
    uLongf n = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> out(n);
    if (compress(out.data(), &n, raw.data(), static_cast<uLong>(raw.size())) != Z_OK)
        throw std::runtime_error("zlib compress failed");
    out.resize(n);
    return out;
}

} // namespace

std::vector<std::uint16_t> TiffFixture::pixel_values() const
{
    if (!samples.empty()) return samples;
    std::vector<std::uint16_t> v(static_cast<std::size_t>(width) * height * samples_per_pixel);
    const std::uint32_t mask = bits == 16 ? 0xffff : 0xff;
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = static_cast<std::uint16_t>((k * 37 + 11) & mask);
    return v;
}

std::vector<std::uint16_t> geo_key_directory(const std::vector<std::pair<std::uint16_t, std::uint16_t>>& keys)
{
    std::vector<std::uint16_t> d{1, 1, 0, static_cast<std::uint16_t>(keys.size())};
    for (const auto& [k, v] : keys) {
        d.push_back(k);
        d.push_back(0);
        d.push_back(1);
        d.push_back(v);
    }
    return d;
}

std::vector<std::uint8_t> encode_tiff(const TiffFixture& f)
{
    const bool le = f.little_endian;
    const std::vector<std::uint16_t> px = f.pixel_values();
    const std::size_t spp = f.samples_per_pixel;
    const std::size_t bps = f.bits / 8;

    // Blocks: strips of rows, or square tiles padded with zeros.
    struct Block {
        std::uint32_t x0, y0, w, h;
    };
    std::vector<Block> blocks;
    if (f.tile_size > 0) {
        for (std::uint32_t y = 0; y < f.height; y += f.tile_size)
            for (std::uint32_t x = 0; x < f.width; x += f.tile_size) blocks.push_back({x, y, f.tile_size, f.tile_size});
    } else {
        const std::uint32_t rps = f.rows_per_strip == 0 ? f.height : f.rows_per_strip;
        for (std::uint32_t y = 0; y < f.height; y += rps) blocks.push_back({0, y, f.width, std::min(rps, f.height - y)});
    }

    std::vector<std::vector<std::uint8_t>> encoded;
    for (const Block& b : blocks) {
        std::vector<std::uint16_t> vals(static_cast<std::size_t>(b.w) * b.h * spp, 0);
        for (std::uint32_t y = 0; y < b.h; ++y)
            for (std::uint32_t x = 0; x < b.w; ++x)
                for (std::size_t c = 0; c < spp; ++c) {
                    const std::uint32_t gx = b.x0 + x;
                    const std::uint32_t gy = b.y0 + y;
                    if (gx < f.width && gy < f.height)
                        vals[(static_cast<std::size_t>(y) * b.w + x) * spp + c] =
                            px[(static_cast<std::size_t>(gy) * f.width + gx) * spp + c];
                }
        if (f.predictor == 2) {
            for (std::uint32_t y = 0; y < b.h; ++y)
                for (std::uint32_t x = b.w - 1; x >= 1; --x)
                    for (std::size_t c = 0; c < spp; ++c) {
                        auto& cur = vals[(static_cast<std::size_t>(y) * b.w + x) * spp + c];
                        const auto prev = vals[(static_cast<std::size_t>(y) * b.w + x - 1) * spp + c];
                        cur = static_cast<std::uint16_t>(cur - prev);
                        if (bps == 1) cur &= 0xff;
                    }
        }
        Sink s(le);
        for (std::uint16_t v : vals) {
            if (bps == 1) s.u8(static_cast<std::uint8_t>(v));
            else s.u16(v);
        }
        encoded.push_back(f.compression == 8 ? deflate(s.bytes) : s.bytes);
    }

    Sink out(le);
    out.u8(le ? 'I' : 'M');
    out.u8(le ? 'I' : 'M');
    out.u16(42);
    out.u32(0); // IFD offset, patched below

    std::vector<std::uint64_t> offsets;
    std::vector<std::uint64_t> counts;
    for (const auto& e : encoded) {
        offsets.push_back(out.bytes.size());
        counts.push_back(e.size());
        out.bytes.insert(out.bytes.end(), e.begin(), e.end());
        out.align();
    }

    std::map<std::uint16_t, Entry> tags;
    tags[256] = make(le, TiffType::Long, {f.width});
    tags[257] = make(le, TiffType::Long, {f.height});
    tags[258] = make(le, TiffType::Short, std::vector<std::uint64_t>(spp, f.bits));
    tags[259] = make(le, TiffType::Short, {f.compression});
    tags[262] = make(le, TiffType::Short, {spp >= 3 ? 2u : 1u});
    tags[277] = make(le, TiffType::Short, {spp});
    tags[284] = make(le, TiffType::Short, {1});
    if (f.predictor != 1) tags[317] = make(le, TiffType::Short, {f.predictor});
    if (f.tile_size > 0) {
        tags[322] = make(le, TiffType::Short, {f.tile_size});
        tags[323] = make(le, TiffType::Short, {f.tile_size});
        tags[324] = make(le, TiffType::Long, offsets);
        tags[325] = make(le, TiffType::Long, counts);
    } else {
        tags[273] = make(le, TiffType::Long, offsets);
        tags[278] = make(le, TiffType::Long, {f.rows_per_strip == 0 ? f.height : f.rows_per_strip});
        tags[279] = make(le, TiffType::Long, counts);
    }
    if (f.pixel_scale) tags[33550] = make_doubles(le, *f.pixel_scale);
    if (f.tiepoint) tags[33922] = make_doubles(le, *f.tiepoint);
    if (f.transformation) tags[34264] = make_doubles(le, *f.transformation);
    if (!f.geo_keys.empty())
        tags[34735] = make(le, TiffType::Short, std::vector<std::uint64_t>(f.geo_keys.begin(), f.geo_keys.end()));
    if (f.nodata) tags[42113] = make_ascii(*f.nodata);
    for (const auto& x : f.extra) tags[x.tag] = make(le, x.type, x.values);

    out.align();
    const std::size_t ifd = out.bytes.size();
    out.patch32(4, static_cast<std::uint32_t>(ifd));
    out.u16(static_cast<std::uint16_t>(tags.size()));
    std::vector<std::pair<std::size_t, const Entry*>> deferred;
    for (const auto& [tag, e] : tags) {
        out.u16(tag);
        out.u16(static_cast<std::uint16_t>(e.type));
        out.u32(e.count);
        if (e.count * type_size(e.type) <= 4) {
            std::vector<std::uint8_t> inl = e.data;
            inl.resize(4, 0);
            out.bytes.insert(out.bytes.end(), inl.begin(), inl.end());
        } else {
            deferred.emplace_back(out.bytes.size(), &e);
            out.u32(0);
        }
    }
    out.u32(0); // no next IFD
    for (const auto& [at, e] : deferred) {
        out.align();
        out.patch32(at, static_cast<std::uint32_t>(out.bytes.size()));
        out.bytes.insert(out.bytes.end(), e->data.begin(), e->data.end());
    }
    return out.bytes;
}

} // namespace eotile::testing
