#include "eotile/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include "eotile/error.hpp"

namespace eotile {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode)
{
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    return f;
}

[[noreturn]] void png_fail(png_structp png, png_const_charp message)
{
    (void)png;
    throw Error(ErrorCode::Io, std::string("png: ") + message);
}

void png_warn(png_structp, png_const_charp) {}

std::string lower_extension(const std::filesystem::path& path)
{
    std::string ext = path.extension().string();
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext;
}

} // namespace

PixelBlock PixelBlock::filled(std::int64_t width, std::int64_t height, int bands, SampleFormat format,
                              std::uint16_t value)
{
    PixelBlock b;
    b.width = width;
    b.height = height;
    b.bands = bands;
    b.format = format;
    b.samples.assign(static_cast<std::size_t>(width * height * bands), value);
    b.valid = {0, 0, width, height};
    return b;
}

std::vector<std::uint8_t> PixelBlock::bytes() const
{
    if (format == SampleFormat::UInt8) {
        std::vector<std::uint8_t> out(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) out[i] = static_cast<std::uint8_t>(samples[i]);
        return out;
    }
    std::vector<std::uint8_t> out(samples.size() * 2);
    std::memcpy(out.data(), samples.data(), out.size());
    return out;
}

PixelBlock read_png(const std::filesystem::path& path)
{
    FilePtr f = open_file(path, "rb");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_fail, png_warn);
    if (!png) throw Error(ErrorCode::Io, "png: out of memory");
    png_infop info = png_create_info_struct(png);
    struct Guard {
        png_structp* p;
        png_infop* i;
        ~Guard() { png_destroy_read_struct(p, i, nullptr); }
    } guard{&png, &info};

    png_init_io(png, f.get());
    png_read_info(png, info);
    const int color = png_get_color_type(png, info);
    const int depth = png_get_bit_depth(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (depth == 16) png_set_swap(png); // libpng delivers big-endian 16-bit
    png_read_update_info(png, info);

    PixelBlock block;
    block.width = png_get_image_width(png, info);
    block.height = png_get_image_height(png, info);
    block.bands = png_get_channels(png, info);
    const int out_depth = png_get_bit_depth(png, info);
    block.format = out_depth == 16 ? SampleFormat::UInt16 : SampleFormat::UInt8;
    block.valid = {0, 0, block.width, block.height};

    const std::size_t rowbytes = png_get_rowbytes(png, info);
    std::vector<std::uint8_t> raw(rowbytes * static_cast<std::size_t>(block.height));
    std::vector<png_bytep> rows(static_cast<std::size_t>(block.height));
    for (std::int64_t y = 0; y < block.height; ++y) rows[static_cast<std::size_t>(y)] = raw.data() + y * rowbytes;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);

    const std::size_t n = static_cast<std::size_t>(block.width * block.height * block.bands);
    block.samples.resize(n);
    if (block.format == SampleFormat::UInt8) {
        for (std::int64_t y = 0; y < block.height; ++y) {
            const std::uint8_t* row = rows[static_cast<std::size_t>(y)];
            for (std::int64_t k = 0; k < block.width * block.bands; ++k)
                block.samples[static_cast<std::size_t>(y * block.width * block.bands + k)] = row[k];
        }
    } else {
        for (std::int64_t y = 0; y < block.height; ++y) {
            const std::uint8_t* row = rows[static_cast<std::size_t>(y)];
            std::memcpy(&block.samples[static_cast<std::size_t>(y * block.width * block.bands)], row,
                        static_cast<std::size_t>(block.width * block.bands) * 2);
        }
    }
    return block;
}

void write_png(const std::filesystem::path& path, const PixelBlock& block)
{
    if (block.bands < 1 || block.bands > 4) throw_invalid("png supports 1 to 4 bands");
    const int color = block.bands == 1   ? PNG_COLOR_TYPE_GRAY
                      : block.bands == 2 ? PNG_COLOR_TYPE_GRAY_ALPHA
                      : block.bands == 3 ? PNG_COLOR_TYPE_RGB
                                         : PNG_COLOR_TYPE_RGB_ALPHA;
    const int depth = block.format == SampleFormat::UInt16 ? 16 : 8;

    FilePtr f = open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_fail, png_warn);
    if (!png) throw Error(ErrorCode::Io, "png: out of memory");
    png_infop info = png_create_info_struct(png);
    struct Guard {
        png_structp* p;
        png_infop* i;
        ~Guard() { png_destroy_write_struct(p, i); }
    } guard{&png, &info};

    png_init_io(png, f.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(block.width), static_cast<png_uint_32>(block.height), depth,
                 color, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    if (depth == 16) png_set_swap(png);

    const std::size_t row_samples = static_cast<std::size_t>(block.width * block.bands);
    std::vector<std::uint8_t> row(row_samples * (depth / 8));
    for (std::int64_t y = 0; y < block.height; ++y) {
        const std::uint16_t* src = &block.samples[static_cast<std::size_t>(y) * row_samples];
        if (depth == 8) {
            for (std::size_t k = 0; k < row_samples; ++k) row[k] = static_cast<std::uint8_t>(src[k]);
        } else {
            std::memcpy(row.data(), src, row.size());
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
}

PixelBlock read_pgm(const std::filesystem::path& path)
{
    const std::vector<std::uint8_t> data = read_file_bytes(path);
    std::size_t pos = 0;
    auto skip_space = [&] {
        while (pos < data.size()) {
            if (data[pos] == '#') {
                while (pos < data.size() && data[pos] != '\n') ++pos;
            } else if (std::isspace(data[pos])) {
                ++pos;
            } else {
                break;
            }
        }
    };
    auto read_int = [&]() -> std::int64_t {
        skip_space();
        std::int64_t v = 0;
        const std::size_t start = pos;
        while (pos < data.size() && std::isdigit(data[pos]) && pos - start < 9) v = v * 10 + (data[pos++] - '0');
        if (pos == start) throw ParseError("pgm: expected integer", pos);
        return v;
    };
    if (data.size() < 2 || data[0] != 'P' || data[1] != '5') throw ParseError("pgm: not a binary P5 file", 0);
    pos = 2;
    PixelBlock block;
    block.width = read_int();
    block.height = read_int();
    const std::int64_t maxval = read_int();
    if (block.width <= 0 || block.height <= 0 || maxval <= 0 || maxval > 65535)
        throw ParseError("pgm: invalid header values", pos);
    ++pos; // single whitespace after maxval
    block.format = maxval > 255 ? SampleFormat::UInt16 : SampleFormat::UInt8;
    const std::size_t bps = block.format == SampleFormat::UInt16 ? 2 : 1;
    const std::size_t n = static_cast<std::size_t>(block.width * block.height);
    if (pos > data.size() || data.size() - pos < n * bps) throw ParseError("pgm: truncated pixel data", pos);
    block.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        block.samples[i] = bps == 1 ? data[pos + i]
                                    : static_cast<std::uint16_t>((data[pos + 2 * i] << 8) | data[pos + 2 * i + 1]);
    }
    block.valid = {0, 0, block.width, block.height};
    return block;
}

void write_pgm(const std::filesystem::path& path, const PixelBlock& block)
{
    if (block.bands != 1) throw_invalid("pgm supports a single band");
    const bool wide = block.format == SampleFormat::UInt16;
    std::ostringstream header;
    header << "P5\n" << block.width << ' ' << block.height << '\n' << (wide ? 65535 : 255) << '\n';
    const std::string h = header.str();
    std::vector<std::uint8_t> out(h.begin(), h.end());
    out.reserve(out.size() + block.samples.size() * (wide ? 2 : 1));
    for (std::uint16_t s : block.samples) {
        if (wide) out.push_back(static_cast<std::uint8_t>(s >> 8));
        out.push_back(static_cast<std::uint8_t>(s & 0xff));
    }
    write_file_bytes(path, out);
}

PixelBlock read_image(const std::filesystem::path& path)
{
    const std::string ext = lower_extension(path);
    if (ext == ".png") return read_png(path);
    if (ext == ".pgm") return read_pgm(path);
    throw_invalid("unsupported image extension '" + ext + "' for " + path.string());
}

void write_image(const std::filesystem::path& path, const PixelBlock& block)
{
    const std::string ext = lower_extension(path);
    if (ext == ".png") return write_png(path, block);
    if (ext == ".pgm") return write_pgm(path, block);
    throw_invalid("unsupported image extension '" + ext + "' for " + path.string());
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

void write_file_text(const std::filesystem::path& path, const std::string& text)
{
    write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

} // namespace eotile
