#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace eotile {

/// Per-axis real quantity (pixels or meters depending on context).
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator*(Vec2 a, double k) { return {a.x * k, a.y * k}; }
    friend constexpr Vec2 operator/(Vec2 a, double k) { return {a.x / k, a.y / k}; }
    friend constexpr bool operator==(Vec2, Vec2) = default;
};

struct Count2 {
    std::int64_t x = 0;
    std::int64_t y = 0;

    constexpr std::int64_t total() const { return x * y; }
    friend constexpr bool operator==(Count2, Count2) = default;
};

/// Integer pixel rectangle, half-open: [x0, x1) x [y0, y1). May extend past
/// raster bounds (negative or beyond the extent) for overhanging tiles.
struct PixelWindow {
    std::int64_t x0 = 0;
    std::int64_t y0 = 0;
    std::int64_t x1 = 0;
    std::int64_t y1 = 0;

    constexpr std::int64_t width() const { return x1 - x0; }
    constexpr std::int64_t height() const { return y1 - y0; }
    constexpr bool empty() const { return x1 <= x0 || y1 <= y0; }
    constexpr std::int64_t area() const { return empty() ? 0 : width() * height(); }
    constexpr bool contains(std::int64_t x, std::int64_t y) const
    {
        return x >= x0 && x < x1 && y >= y0 && y < y1;
    }
    constexpr PixelWindow intersect(const PixelWindow& o) const
    {
        PixelWindow r{std::max(x0, o.x0), std::max(y0, o.y0), std::min(x1, o.x1), std::min(y1, o.y1)};
        if (r.empty()) return {};
        return r;
    }
    friend constexpr bool operator==(const PixelWindow&, const PixelWindow&) = default;
};

/// Closed real interval on one axis.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    constexpr double width() const { return hi - lo; }
    friend constexpr bool operator==(Interval, Interval) = default;
};

/// Axis-aligned real rectangle given by origin and extent.
struct RealRect {
    Vec2 origin;
    Vec2 extent;

    constexpr Vec2 max() const { return origin + extent; }
};

/// Round half up: exact .5 ties always go to the larger integer. Values within
/// 1e-9 of a tie are treated as ties so that edges computed along different
/// arithmetic paths discretize identically.
inline std::int64_t round_half_up(double v)
{
    return static_cast<std::int64_t>(std::floor(v + 0.5 + 1e-9));
}

} // namespace eotile
