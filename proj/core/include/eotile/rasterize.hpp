#pragma once

// Vector labels (GeoJSON Polygon / MultiPolygon) to label grids.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "eotile/georef.hpp"
#include "eotile/label_grid.hpp"

namespace eotile {

/// Closed ring (first vertex == last vertex) in CRS coordinates.
using Ring = std::vector<Vec2>;

/// Exterior ring followed by zero or more holes.
struct PolygonPart {
    std::vector<Ring> rings;
};

struct LabelFeature {
    std::vector<PolygonPart> parts;
    int class_id = 1;
};

struct VectorLabelSet {
    std::vector<LabelFeature> features;
    std::string crs; ///< normalized ("EPSG:<code>"), empty when the file has none
    std::size_t skipped = 0; ///< features rejected (unsupported type, bad ring, bad class)
    std::vector<std::string> warnings;
};

struct GeoJsonOptions {
    std::string class_property = "class";
    int default_class = 1;
};

/// Throws ParseError for malformed JSON or a non-FeatureCollection root.
/// Feature-level problems skip the feature and are counted.
VectorLabelSet parse_geojson(std::string_view json, const GeoJsonOptions& options = {});

/// "urn:ogc:def:crs:EPSG::3857" and friends -> "EPSG:3857"; CRS84 -> "EPSG:4326".
std::string normalize_crs_name(const std::string& name);

/// Scanline fill, even-odd rule per polygon part; a pixel is set when its
/// center lies inside. Features are painted in input order, later ones over
/// earlier ones. Throws Error(UnsupportedCrs) when the label CRS is set and
/// differs from the raster CRS. `classes` of the result is max(class) + 1
/// unless given.
LabelGrid rasterize(const VectorLabelSet& labels, const RasterMeta& meta, std::uint8_t background = 0,
                    int classes = 0);

} // namespace eotile
