#include "eotile/error_stats.hpp"

#include <cmath>
#include <cstdio>

#include "eotile/error.hpp"

namespace eotile {

std::int64_t ErrorHistogram::bin_of(double distance)
{
    return 2 * static_cast<std::int64_t>(std::floor(distance / 2.0 + 0.5));
}

void ErrorHistogram::add(double distance, bool wrong)
{
    auto& c = counts_[bin_of(distance)];
    c.first += wrong ? 1 : 0;
    c.second += 1;
}

void ErrorHistogram::add_tile(const LabelGrid& prediction, const LabelGrid& truth)
{
    if (prediction.width != truth.width || prediction.height != truth.height)
        throw_invalid("prediction and ground truth sizes differ");
    const double cx = static_cast<double>(prediction.width) / 2.0;
    const double cy = static_cast<double>(prediction.height) / 2.0;
    for (std::int64_t y = 0; y < prediction.height; ++y) {
        for (std::int64_t x = 0; x < prediction.width; ++x) {
            const std::uint8_t t = truth.at(x, y);
            if (t == kIgnoreLabel) continue;
            const double d = std::hypot(static_cast<double>(x) + 0.5 - cx, static_cast<double>(y) + 0.5 - cy);
            add(d, prediction.at(x, y) != t);
        }
    }
}

std::vector<ErrorBin> ErrorHistogram::bins() const
{
    std::vector<ErrorBin> out;
    out.reserve(counts_.size());
    for (const auto& [bin, c] : counts_)
        out.push_back({bin, static_cast<double>(c.first) / static_cast<double>(c.second), c.second});
    return out;
}

LabelGrid crop_labels(const LabelGrid& truth, const TileRef& tile, const std::optional<ModelSpec>& model)
{
    const std::int64_t w = model ? model->width : tile.window.width();
    const std::int64_t h = model ? model->height : tile.window.height();
    if (w <= 0 || h <= 0) throw_invalid("empty tile");
    LabelGrid out(w, h, truth.classes, kIgnoreLabel);
    for (std::int64_t y = 0; y < h; ++y) {
        std::int64_t sy = tile.window.y0 + y;
        if (model) {
            const double step = tile.extent_px.y / static_cast<double>(h);
            sy = static_cast<std::int64_t>(std::floor(tile.origin_px.y + (static_cast<double>(y) + 0.5) * step));
        }
        if (sy < 0 || sy >= truth.height) continue;
        for (std::int64_t x = 0; x < w; ++x) {
            std::int64_t sx = tile.window.x0 + x;
            if (model) {
                const double step = tile.extent_px.x / static_cast<double>(w);
                sx = static_cast<std::int64_t>(std::floor(tile.origin_px.x + (static_cast<double>(x) + 0.5) * step));
            }
            if (sx < 0 || sx >= truth.width) continue;
            out.at(x, y) = truth.at(sx, sy);
        }
    }
    return out;
}

std::vector<ErrorBin> error_vs_center_distance(std::span<const TileRef> tiles, const PredictionSet& predictions,
                                               const LabelGrid& truth, const std::optional<ModelSpec>& model)
{
    ErrorHistogram hist;
    for (const TileRef& tile : tiles) {
        auto it = predictions.find(tile.id);
        if (it == predictions.end()) throw Error(ErrorCode::MissingTile, "no prediction for tile " + tile.id);
        hist.add_tile(it->second, crop_labels(truth, tile, model));
    }
    return hist.bins();
}

std::string error_table_csv(std::span<const ErrorBin> bins)
{
    std::string out = "distance_px,mean_error,count\n";
    char line[96];
    for (const ErrorBin& b : bins) {
        std::snprintf(line, sizeof line, "%lld,%.6f,%lld\n", static_cast<long long>(b.distance_px), b.mean_error,
                      static_cast<long long>(b.count));
        out += line;
    }
    return out;
}

} // namespace eotile
