#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "eotile/geometry.hpp"

namespace eotile {

enum class SampleFormat { UInt8, UInt16 };

inline constexpr std::uint16_t kDefaultPadValue = 255;

/// Row-major, band-interleaved pixel buffer. Samples are held as uint16 for
/// both 8- and 16-bit sources; `format` records the original depth.
struct PixelBlock {
    std::int64_t width = 0;
    std::int64_t height = 0;
    int bands = 1;
    SampleFormat format = SampleFormat::UInt8;
    std::vector<std::uint16_t> samples;

    /// True when any sample was filled with the pad value (out-of-bounds read).
    bool padded = false;
    /// Bounding box (block coordinates) of samples backed by raster data.
    PixelWindow valid;

    static PixelBlock filled(std::int64_t width, std::int64_t height, int bands, SampleFormat format,
                             std::uint16_t value);

    std::size_t index(std::int64_t x, std::int64_t y, int band = 0) const
    {
        return static_cast<std::size_t>((y * width + x) * bands + band);
    }
    std::uint16_t at(std::int64_t x, std::int64_t y, int band = 0) const { return samples[index(x, y, band)]; }
    void set(std::int64_t x, std::int64_t y, int band, std::uint16_t v) { samples[index(x, y, band)] = v; }

    /// Contiguous row-major bytes; 16-bit samples in native byte order.
    std::vector<std::uint8_t> bytes() const;

    friend bool operator==(const PixelBlock&, const PixelBlock&) = default;
};

PixelBlock read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const PixelBlock& block);

/// Binary PGM (P5), single band, 8- or 16-bit.
PixelBlock read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const PixelBlock& block);

/// Dispatches on extension (.png, .pgm).
PixelBlock read_image(const std::filesystem::path& path);
void write_image(const std::filesystem::path& path, const PixelBlock& block);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file_text(const std::filesystem::path& path, const std::string& text);

} // namespace eotile
