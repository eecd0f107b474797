#pragma once

#include <cstdint>
#include <vector>

#include "eotile/image_io.hpp"

namespace eotile {

inline constexpr std::uint8_t kIgnoreLabel = 255;

/// Dense single-channel class-label raster, row-major. Values are class
/// indices in [0, classes) or kIgnoreLabel.
struct LabelGrid {
    std::int64_t width = 0;
    std::int64_t height = 0;
    int classes = 0;
    std::vector<std::uint8_t> data;

    LabelGrid() = default;
    LabelGrid(std::int64_t width, std::int64_t height, int classes, std::uint8_t fill = 0);

    std::uint8_t at(std::int64_t x, std::int64_t y) const
    {
        return data[static_cast<std::size_t>(y * width + x)];
    }
    std::uint8_t& at(std::int64_t x, std::int64_t y) { return data[static_cast<std::size_t>(y * width + x)]; }

    /// Throws invalid-argument when the size or a label is out of range.
    void validate() const;

    /// Band 0 of an 8-bit block; `classes` is inferred as max label + 1 when 0.
    static LabelGrid from_block(const PixelBlock& block, int classes = 0);
    PixelBlock to_block() const;

    friend bool operator==(const LabelGrid&, const LabelGrid&) = default;
};

} // namespace eotile
