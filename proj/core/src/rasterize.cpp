#include "eotile/rasterize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eotile/error.hpp"

namespace eotile {

namespace {

struct Edge {
    Vec2 a;
    Vec2 b;
};

void fill_part(const std::vector<Edge>& edges, double ymin, double ymax, LabelGrid& grid, std::uint8_t value)
{
    const std::int64_t row_begin = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(ymin - 0.5)));
    const std::int64_t row_end =
        std::min<std::int64_t>(grid.height, static_cast<std::int64_t>(std::ceil(ymax - 0.5)));
    std::vector<double> xs;
    for (std::int64_t row = row_begin; row < row_end; ++row) {
        const double yc = static_cast<double>(row) + 0.5;
        xs.clear();
        for (const Edge& e : edges) {
            // Half-open in y so shared vertices are counted once.
            if ((e.a.y <= yc && yc < e.b.y) || (e.b.y <= yc && yc < e.a.y))
                xs.push_back(e.a.x + (yc - e.a.y) * (e.b.x - e.a.x) / (e.b.y - e.a.y));
        }
        std::sort(xs.begin(), xs.end());
        for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
            // Pixel centers c = col + 0.5 with xs[k] <= c < xs[k + 1].
            const std::int64_t c0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(xs[k] - 0.5)));
            const std::int64_t c1 =
                std::min<std::int64_t>(grid.width, static_cast<std::int64_t>(std::ceil(xs[k + 1] - 0.5)));
            for (std::int64_t col = c0; col < c1; ++col) grid.at(col, row) = value;
        }
    }
}

} // namespace

LabelGrid rasterize(const VectorLabelSet& labels, const RasterMeta& meta, std::uint8_t background, int classes)
{
    if (!labels.crs.empty() && labels.crs != meta.crs)
        throw Error(ErrorCode::UnsupportedCrs,
                    "label CRS '" + labels.crs + "' differs from raster CRS '" + meta.crs + "' (no reprojection)");
    if (!meta.geotransform.invertible()) throw_invalid("raster geotransform is degenerate");

    int max_class = background == kIgnoreLabel ? -1 : background;
    for (const LabelFeature& f : labels.features) max_class = std::max(max_class, f.class_id);
    LabelGrid grid(meta.extent_px.width, meta.extent_px.height, classes > 0 ? classes : max_class + 1, background);

    std::vector<Edge> edges;
    for (const LabelFeature& feature : labels.features) {
        for (const PolygonPart& part : feature.parts) {
            edges.clear();
            double ymin = std::numeric_limits<double>::infinity();
            double ymax = -ymin;
            for (const Ring& ring : part.rings) {
                for (std::size_t k = 0; k + 1 < ring.size(); ++k) {
                    const Vec2 a = meta.geotransform.apply_inverse(ring[k]);
                    const Vec2 b = meta.geotransform.apply_inverse(ring[k + 1]);
                    ymin = std::min({ymin, a.y, b.y});
                    ymax = std::max({ymax, a.y, b.y});
                    if (a.y != b.y) edges.push_back({a, b});
                }
            }
            fill_part(edges, ymin, ymax, grid, static_cast<std::uint8_t>(feature.class_id));
        }
    }
    return grid;
}

} // namespace eotile
