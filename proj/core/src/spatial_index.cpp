#include "eotile/spatial_index.hpp"

#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>

#include <algorithm>
#include <iterator>

namespace eotile {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

namespace {

using Point = bg::model::point<double, 2, bg::cs::cartesian>;
using Box = bg::model::box<Point>;
using Value = std::pair<Box, std::size_t>;

Box to_box(const RealRect& r)
{
    const Vec2 hi = r.max();
    return Box(Point(r.origin.x, r.origin.y), Point(hi.x, hi.y));
}

} // namespace

struct SpatialIndex::Impl {
    std::vector<RealRect> rects;
    bgi::rtree<Value, bgi::rstar<16>> tree;
};

bool overlaps(const RealRect& a, const RealRect& b)
{
    const Vec2 amax = a.max();
    const Vec2 bmax = b.max();
    return a.origin.x < bmax.x && b.origin.x < amax.x && a.origin.y < bmax.y && b.origin.y < amax.y;
}

std::vector<std::size_t> naive_overlaps(std::span<const RealRect> rects, const RealRect& query)
{
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < rects.size(); ++k)
        if (overlaps(rects[k], query)) out.push_back(k);
    return out;
}

RealRect window_rect(const TileRef& tile)
{
    const PixelWindow& w = tile.window;
    return {{static_cast<double>(w.x0), static_cast<double>(w.y0)},
            {static_cast<double>(w.width()), static_cast<double>(w.height())}};
}

SpatialIndex::SpatialIndex() : SpatialIndex(std::vector<RealRect>{}) {}

SpatialIndex::SpatialIndex(std::vector<RealRect> rects)
{
    auto impl = std::make_shared<Impl>();
    std::vector<Value> values;
    values.reserve(rects.size());
    for (std::size_t k = 0; k < rects.size(); ++k) values.emplace_back(to_box(rects[k]), k);
    impl->tree = bgi::rtree<Value, bgi::rstar<16>>(values); // range constructor packs (STR)
    impl->rects = std::move(rects);
    impl_ = std::move(impl);
}

SpatialIndex SpatialIndex::from_tiles(std::span<const TileRef> tiles)
{
    std::vector<RealRect> rects;
    rects.reserve(tiles.size());
    for (const TileRef& t : tiles) rects.push_back(window_rect(t));
    return SpatialIndex(std::move(rects));
}

std::vector<std::size_t> SpatialIndex::query(const RealRect& rect) const
{
    std::vector<Value> hits;
    impl_->tree.query(bgi::intersects(to_box(rect)), std::back_inserter(hits));
    std::vector<std::size_t> out;
    out.reserve(hits.size());
    // Boost's intersects includes touching boxes; keep positive-area overlaps.
    for (const Value& v : hits)
        if (overlaps(impl_->rects[v.second], rect)) out.push_back(v.second);
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t SpatialIndex::size() const { return impl_->rects.size(); }

const RealRect& SpatialIndex::rect(std::size_t index) const { return impl_->rects.at(index); }

} // namespace eotile
