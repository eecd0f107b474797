#include "eotile/label_grid.hpp"

#include <algorithm>
#include <string>

#include "eotile/error.hpp"

namespace eotile {

LabelGrid::LabelGrid(std::int64_t w, std::int64_t h, int k, std::uint8_t fill)
    : width(w), height(h), classes(k), data(static_cast<std::size_t>(std::max<std::int64_t>(0, w * h)), fill)
{
    if (w < 0 || h < 0) throw_invalid("label grid extent must be non-negative");
}

void LabelGrid::validate() const
{
    if (width < 0 || height < 0) throw_invalid("label grid extent must be non-negative");
    if (data.size() != static_cast<std::size_t>(width * height))
        throw_invalid("label grid data length " + std::to_string(data.size()) + " does not match " +
                      std::to_string(width) + "x" + std::to_string(height));
    if (classes < 0 || classes > 255) throw_invalid("label grid class count must be in [0, 255]");
    for (std::uint8_t v : data) {
        if (v != kIgnoreLabel && v >= classes)
            throw_invalid("label " + std::to_string(v) + " outside [0, " + std::to_string(classes) + ")");
    }
}

LabelGrid LabelGrid::from_block(const PixelBlock& block, int classes)
{
    LabelGrid grid;
    grid.width = block.width;
    grid.height = block.height;
    grid.data.resize(static_cast<std::size_t>(block.width * block.height));
    int max_label = -1;
    for (std::int64_t y = 0; y < block.height; ++y) {
        for (std::int64_t x = 0; x < block.width; ++x) {
            const std::uint16_t v = block.at(x, y, 0);
            if (v > 255) throw_invalid("label value " + std::to_string(v) + " does not fit 8 bits");
            grid.at(x, y) = static_cast<std::uint8_t>(v);
            if (v != kIgnoreLabel) max_label = std::max<int>(max_label, v);
        }
    }
    grid.classes = classes > 0 ? classes : max_label + 1;
    grid.validate();
    return grid;
}

PixelBlock LabelGrid::to_block() const
{
    PixelBlock block = PixelBlock::filled(width, height, 1, SampleFormat::UInt8, 0);
    for (std::size_t i = 0; i < data.size(); ++i) block.samples[i] = data[i];
    return block;
}

} // namespace eotile
