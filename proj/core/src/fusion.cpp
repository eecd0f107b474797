#include "eotile/fusion.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <tuple>

#include "eotile/error.hpp"

namespace eotile {

namespace {

bool near(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); }

bool near_integer(double v, double& rounded)
{
    rounded = std::round(v);
    return near(v, rounded);
}

/// Exclusive pixel bound for pixels with center <= boundary.
std::int64_t split_pixel(double boundary)
{
    double v = boundary - 0.5;
    double r;
    if (near_integer(v, r)) v = r;
    return static_cast<std::int64_t>(std::floor(v)) + 1;
}

struct AxisRegion {
    Interval real;
    std::int64_t lo;
    std::int64_t hi;
};

AxisRegion axis_region(double offset, double stride, double tile, double raster, std::int64_t count, std::int64_t k)
{
    const auto raster_px = static_cast<std::int64_t>(std::llround(raster));
    const double center = offset + static_cast<double>(k) * stride + tile / 2.0;
    AxisRegion out{reliable_interval(center, stride), 0, raster_px};
    if (k == 0) out.real.lo = 0.0;
    if (k == count - 1) out.real.hi = raster;
    out.real.lo = std::clamp(out.real.lo, 0.0, raster);
    out.real.hi = std::clamp(out.real.hi, 0.0, raster);
    // Shared boundary between tiles j and j + 1, computed one way for both.
    auto boundary = [&](std::int64_t j) { return offset + tile / 2.0 + (static_cast<double>(j) + 0.5) * stride; };
    if (k > 0) out.lo = split_pixel(boundary(k - 1));
    if (k < count - 1) out.hi = split_pixel(boundary(k));
    out.lo = std::clamp<std::int64_t>(out.lo, 0, raster_px);
    out.hi = std::clamp<std::int64_t>(out.hi, out.lo, raster_px);
    return out;
}

void check_axis(double base_offset, double base_stride, double base_tile, double aux_offset, double aux_stride,
                double aux_tile, int& m_out, const char* axis)
{
    if (!near(base_tile, aux_tile))
        throw Error(ErrorCode::AlignmentError, std::string("tile extents differ on ") + axis);
    if (!near(base_stride, base_tile))
        throw Error(ErrorCode::AlignmentError, std::string("base stride must equal the tile extent on ") + axis);
    double m;
    if (!near_integer(aux_tile / aux_stride, m) || m < 1)
        throw Error(ErrorCode::AlignmentError,
                    std::string("auxiliary stride does not divide the tile extent on ") + axis);
    double k;
    if (!near_integer((base_offset - aux_offset) / aux_stride, k))
        throw Error(ErrorCode::AlignmentError,
                    std::string("base tile origins are not on the auxiliary lattice on ") + axis);
    m_out = static_cast<int>(m);
}

} // namespace

Interval reliable_interval(double center, double stride) { return {center - stride / 2.0, center + stride / 2.0}; }

std::int64_t substitution_neighbor_count(double stride, double tile)
{
    if (!(stride > 0.0) || !(tile > 0.0) || !std::isfinite(stride) || !std::isfinite(tile))
        throw_invalid("stride and tile extent must be positive");
    if (stride > tile && !near(stride, tile)) throw_invalid("stride must not exceed the tile extent");
    double q = (tile - stride) / (2.0 * stride);
    double r;
    if (near_integer(q, r)) q = r;
    return 2 * static_cast<std::int64_t>(std::ceil(std::max(q, 0.0)));
}

std::int64_t substitution_neighbor_count_2d(Vec2 stride, Vec2 tile)
{
    const std::int64_t sx = substitution_neighbor_count(stride.x, tile.x);
    const std::int64_t sy = substitution_neighbor_count(stride.y, tile.y);
    return (sx + 1) * (sy + 1) - 1;
}

ReliableRegion reliable_region(const TilingScheme& scheme, GridIndex index)
{
    const SchemeSpec& spec = scheme.spec;
    if ((spec.stride.x > spec.tile_extent.x && !near(spec.stride.x, spec.tile_extent.x)) ||
        (spec.stride.y > spec.tile_extent.y && !near(spec.stride.y, spec.tile_extent.y)))
        throw_invalid("reliable regions need stride <= tile extent");
    const AxisRegion ax = axis_region(scheme.offset.x, spec.stride.x, spec.tile_extent.x, scheme.raster_extent.x,
                                      scheme.counts.x, index.i);
    const AxisRegion ay = axis_region(scheme.offset.y, spec.stride.y, spec.tile_extent.y, scheme.raster_extent.y,
                                      scheme.counts.y, index.j);
    ReliableRegion out{ax.real, ay.real, {ax.lo, ay.lo, ax.hi, ay.hi}};
    if (out.window.empty()) out.window = {};
    return out;
}

TilingScheme base_scheme_for(const TilingScheme& aux)
{
    SchemeSpec spec = aux.spec;
    spec.stride = spec.tile_extent;
    return build_scheme(aux.raster_extent, spec);
}

int check_alignment(const TilingScheme& base, const TilingScheme& aux)
{
    if (!near(base.raster_extent.x, aux.raster_extent.x) || !near(base.raster_extent.y, aux.raster_extent.y))
        throw Error(ErrorCode::AlignmentError, "base and auxiliary schemes cover different rasters");
    int mx = 1;
    int my = 1;
    check_axis(base.offset.x, base.spec.stride.x, base.spec.tile_extent.x, aux.offset.x, aux.spec.stride.x,
               aux.spec.tile_extent.x, mx, "x");
    check_axis(base.offset.y, base.spec.stride.y, base.spec.tile_extent.y, aux.offset.y, aux.spec.stride.y,
               aux.spec.tile_extent.y, my, "y");
    if (mx != my) throw Error(ErrorCode::AlignmentError, "stride divisors differ between axes");
    if (!base.empty() && aux.empty()) throw Error(ErrorCode::AlignmentError, "auxiliary scheme has no tiles");
    return mx;
}

FusionPlan plan_fusion(const TilingScheme& base, const TilingScheme& aux)
{
    std::vector<TileRef> aux_tiles = enumerate_tiles(aux);
    const SpatialIndex index = SpatialIndex::from_tiles(aux_tiles);
    return plan_fusion(base, aux, index, std::move(aux_tiles));
}

FusionPlan plan_fusion(const TilingScheme& base, const TilingScheme& aux, const SpatialIndex& aux_index,
                       std::vector<TileRef> aux_tiles)
{
    FusionPlan plan;
    plan.stride_divisor = check_alignment(base, aux);
    if (aux_index.size() != aux_tiles.size())
        throw_invalid("spatial index does not match the auxiliary tile list");
    plan.base = base;
    plan.aux = aux;
    plan.aux_tiles = std::move(aux_tiles);

    const auto rw = static_cast<std::int64_t>(std::llround(base.raster_extent.x));
    const auto rh = static_cast<std::int64_t>(std::llround(base.raster_extent.y));
    const PixelWindow raster{0, 0, rw, rh};

    for (TileRef& base_tile : enumerate_tiles(base)) {
        BaseTilePlan tp;
        tp.destination = base_tile.window.intersect(raster);
        if (!tp.destination.empty()) {
            // One pixel of slack so donors whose windows only touch after
            // rounding are still found; empty destinations are dropped below.
            RealRect q = window_rect(base_tile);
            q.origin = q.origin - Vec2{1.0, 1.0};
            q.extent = q.extent + Vec2{2.0, 2.0};
            std::vector<std::size_t> hits = aux_index.query(q);
            std::sort(hits.begin(), hits.end(), [&](std::size_t a, std::size_t b) {
                const GridIndex ia = plan.aux_tiles[a].index;
                const GridIndex ib = plan.aux_tiles[b].index;
                return std::tie(ia.j, ia.i) < std::tie(ib.j, ib.i);
            });
            for (std::size_t h : hits) {
                const TileRef& donor = plan.aux_tiles[h];
                const PixelWindow dest = reliable_region(aux, donor.index).window.intersect(tp.destination);
                if (!dest.empty()) tp.donors.push_back({donor, dest});
            }
            std::int64_t covered = 0;
            for (const DonorAssignment& d : tp.donors) covered += d.destination.area();
            if (covered != tp.destination.area())
                throw Error(ErrorCode::AlignmentError, "auxiliary tiles do not cover base tile " + base_tile.id);
        }
        tp.base = std::move(base_tile);
        plan.tiles.push_back(std::move(tp));
    }
    return plan;
}

std::int64_t local_index(double pixel, double tile_origin, std::int64_t window_origin, double tile_extent,
                         const std::optional<std::int64_t>& model_extent)
{
    if (!model_extent) return static_cast<std::int64_t>(pixel) - window_origin;
    const double step = tile_extent / static_cast<double>(*model_extent);
    const double k = std::floor((pixel + 0.5 - tile_origin) / step + 1e-9);
    return std::clamp<std::int64_t>(static_cast<std::int64_t>(k), 0, *model_extent - 1);
}

LabelGrid fuse(const FusionPlan& plan, const PredictionSet& predictions, const FuseOptions& options)
{
    const auto rw = static_cast<std::int64_t>(std::llround(plan.base.raster_extent.x));
    const auto rh = static_cast<std::int64_t>(std::llround(plan.base.raster_extent.y));

    // Validate every donor up front so workers never throw.
    int classes = 0;
    for (const BaseTilePlan& tp : plan.tiles) {
        for (const DonorAssignment& d : tp.donors) {
            auto it = predictions.find(d.donor.id);
            if (it == predictions.end())
                throw Error(ErrorCode::MissingTile, "no prediction for tile " + d.donor.id);
            const LabelGrid& g = it->second;
            const std::int64_t ew = options.model ? options.model->width : d.donor.window.width();
            const std::int64_t eh = options.model ? options.model->height : d.donor.window.height();
            if (g.width != ew || g.height != eh || g.data.size() != static_cast<std::size_t>(ew * eh))
                throw_invalid("prediction for " + d.donor.id + " is " + std::to_string(g.width) + "x" +
                              std::to_string(g.height) + ", expected " + std::to_string(ew) + "x" +
                              std::to_string(eh));
            classes = std::max(classes, g.classes);
        }
    }

    LabelGrid out(rw, rh, classes, kIgnoreLabel);
    const std::optional<std::int64_t> mw = options.model ? std::optional(options.model->width) : std::nullopt;
    const std::optional<std::int64_t> mh = options.model ? std::optional(options.model->height) : std::nullopt;

    auto fill_tile = [&](const BaseTilePlan& tp) {
        for (const DonorAssignment& d : tp.donors) {
            const LabelGrid& g = predictions.at(d.donor.id);
            const TileRef& t = d.donor;
            for (std::int64_t y = d.destination.y0; y < d.destination.y1; ++y) {
                const std::int64_t ly = std::clamp<std::int64_t>(
                    local_index(static_cast<double>(y), t.origin_px.y, t.window.y0, t.extent_px.y, mh), 0,
                    g.height - 1);
                for (std::int64_t x = d.destination.x0; x < d.destination.x1; ++x) {
                    const std::int64_t lx = std::clamp<std::int64_t>(
                        local_index(static_cast<double>(x), t.origin_px.x, t.window.x0, t.extent_px.x, mw), 0,
                        g.width - 1);
                    out.at(x, y) = g.at(lx, ly);
                }
            }
        }
    };

    const unsigned workers = std::clamp<unsigned>(options.threads, 1, 64);
    if (workers == 1 || plan.tiles.size() < 2) {
        for (const BaseTilePlan& tp : plan.tiles) fill_tile(tp);
        return out;
    }
    // Base destinations are disjoint, so workers write without locking.
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < plan.tiles.size(); k = next++) fill_tile(plan.tiles[k]);
            });
    }
    return out;
}

} // namespace eotile
