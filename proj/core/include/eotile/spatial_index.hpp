#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "eotile/geometry.hpp"
#include "eotile/scheme.hpp"

namespace eotile {

/// True when the rectangles share a region of positive area; rectangles that
/// only touch along an edge do not overlap.
bool overlaps(const RealRect& a, const RealRect& b);

/// Reference scan: indices of all rects overlapping `query`, ascending.
std::vector<std::size_t> naive_overlaps(std::span<const RealRect> rects, const RealRect& query);

/// Rectangle of a tile's discretized window.
RealRect window_rect(const TileRef& tile);

/// Immutable R-tree over rectangles (bulk loaded). Copies share the tree;
/// concurrent queries are safe.
class SpatialIndex {
public:
    SpatialIndex();
    explicit SpatialIndex(std::vector<RealRect> rects);
    static SpatialIndex from_tiles(std::span<const TileRef> tiles);

    /// Same result as naive_overlaps over the indexed rects.
    std::vector<std::size_t> query(const RealRect& rect) const;

    std::size_t size() const;
    const RealRect& rect(std::size_t index) const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

} // namespace eotile
