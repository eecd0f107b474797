#include "eotile/rasterize.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <set>

#include "eotile/error.hpp"

namespace eotile {

namespace {

using nlohmann::json;

struct FeatureError {
    std::string message;
};

Ring read_ring(const json& j)
{
    if (!j.is_array()) throw FeatureError{"ring is not an array"};
    Ring ring;
    for (const json& p : j) {
        if (!p.is_array() || p.size() < 2 || !p[0].is_number() || !p[1].is_number())
            throw FeatureError{"position is not [x, y]"};
        ring.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    if (ring.size() < 4 || !(ring.front() == ring.back())) throw FeatureError{"ring is not closed"};
    return ring;
}

std::size_t distinct_vertices(const Ring& ring)
{
    std::set<std::pair<double, double>> seen;
    for (const Vec2& p : ring) seen.insert({p.x, p.y});
    return seen.size();
}

PolygonPart read_polygon(const json& rings)
{
    if (!rings.is_array() || rings.empty()) throw FeatureError{"polygon has no rings"};
    PolygonPart part;
    for (const json& r : rings) part.rings.push_back(read_ring(r));
    if (distinct_vertices(part.rings.front()) < 3) throw FeatureError{"exterior ring is degenerate"};
    return part;
}

int read_class(const json& feature, const GeoJsonOptions& options)
{
    auto props = feature.find("properties");
    if (props == feature.end() || !props->is_object()) return options.default_class;
    auto it = props->find(options.class_property);
    if (it == props->end() || it->is_null()) return options.default_class;
    if (!it->is_number_integer()) throw FeatureError{"class property '" + options.class_property + "' is not an integer"};
    const int v = it->get<int>();
    if (v < 0 || v >= kIgnoreLabel) throw FeatureError{"class " + std::to_string(v) + " outside [0, 254]"};
    return v;
}

} // namespace

std::string normalize_crs_name(const std::string& name)
{
    std::string upper;
    for (char c : name) upper.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (upper.find("CRS84") != std::string::npos) return "EPSG:4326";
    const auto pos = upper.rfind("EPSG");
    if (pos == std::string::npos) return name;
    std::string digits;
    for (std::size_t k = pos + 4; k < upper.size(); ++k) {
        if (std::isdigit(static_cast<unsigned char>(upper[k]))) digits.push_back(upper[k]);
        else if (!digits.empty()) break;
    }
    return digits.empty() ? name : "EPSG:" + digits;
}

VectorLabelSet parse_geojson(std::string_view text, const GeoJsonOptions& options)
{
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("geojson is not valid JSON: ") + e.what(), e.byte);
    }
    if (!root.is_object() || root.value("type", "") != "FeatureCollection")
        throw ParseError("geojson root must be a FeatureCollection");
    auto features = root.find("features");
    if (features == root.end() || !features->is_array()) throw ParseError("geojson 'features' must be an array");

    VectorLabelSet set;
    if (auto crs = root.find("crs"); crs != root.end() && crs->is_object()) {
        if (auto props = crs->find("properties"); props != crs->end() && props->is_object()) {
            if (auto name = props->find("name"); name != props->end() && name->is_string())
                set.crs = normalize_crs_name(name->get<std::string>());
        }
    }

    std::size_t index = 0;
    for (const json& f : *features) {
        const std::string where = "feature " + std::to_string(index++);
        try {
            if (!f.is_object()) throw FeatureError{"not an object"};
            auto geometry = f.find("geometry");
            if (geometry == f.end() || !geometry->is_object()) throw FeatureError{"missing geometry"};
            const std::string type = geometry->value("type", "");
            auto coords = geometry->find("coordinates");
            if (type != "Polygon" && type != "MultiPolygon")
                throw FeatureError{"unsupported geometry type '" + type + "'"};
            if (coords == geometry->end()) throw FeatureError{"missing coordinates"};

            LabelFeature feature;
            feature.class_id = read_class(f, options);
            if (type == "Polygon") {
                feature.parts.push_back(read_polygon(*coords));
            } else {
                if (!coords->is_array() || coords->empty()) throw FeatureError{"multipolygon has no parts"};
                for (const json& p : *coords) feature.parts.push_back(read_polygon(p));
            }
            set.features.push_back(std::move(feature));
        } catch (const FeatureError& e) {
            ++set.skipped;
            set.warnings.push_back(where + ": " + e.message);
        }
    }
    return set;
}

} // namespace eotile
