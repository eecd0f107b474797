#include "eotile/manifest.hpp"

#include <nlohmann/json.hpp>

#include <set>

#include "eotile/error.hpp"
#include "eotile/image_io.hpp"

namespace eotile {

namespace {

using nlohmann::json;

json vec(Vec2 v) { return json::array({v.x, v.y}); }

json coefficients(const GeoTransform& gt)
{
    const auto c = gt.coefficients();
    return json::array({c[0], c[1], c[2], c[3], c[4], c[5]});
}

json policy_json(const OriginPolicy& policy)
{
    if (const auto* a = std::get_if<CornerAnchored>(&policy)) {
        return {{"policy", "corner"},
                {"offset", vec(a->offset)},
                {"frame", a->frame == AnchorFrame::RasterCenter ? "center" : "origin"}};
    }
    return {{"policy", "centered"}};
}

json spec_json(const SchemeSpec& spec)
{
    return {{"unit", spec.unit == LengthUnit::Meters ? "m" : "px"},
            {"tile_extent", vec(spec.tile_extent)},
            {"stride", vec(spec.stride)},
            {"rounding", to_string(spec.rounding)},
            {"origin", policy_json(spec.origin)}};
}

json raster_json(const RasterMeta& meta)
{
    json j{{"width", meta.extent_px.width},
           {"height", meta.extent_px.height},
           {"gsd", vec(meta.gsd)},
           {"transform", coefficients(meta.geotransform)},
           {"crs", meta.crs},
           {"units", to_string(meta.units)}};
    j["nodata"] = meta.nodata ? json(*meta.nodata) : json(nullptr);
    return j;
}

// Reading helpers: every access is checked and reports the JSON path.
[[noreturn]] void bad(const std::string& path, const std::string& why)
{
    throw ParseError("manifest field '" + path + "': " + why);
}

const json& at(const json& j, const std::string& key, const std::string& path)
{
    if (!j.is_object()) bad(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) bad(path + "." + key, "missing");
    return *it;
}

double number(const json& j, const std::string& path)
{
    if (!j.is_number()) bad(path, "expected a number");
    return j.get<double>();
}

std::int64_t integer(const json& j, const std::string& path)
{
    if (!j.is_number_integer()) bad(path, "expected an integer");
    return j.get<std::int64_t>();
}

std::string text(const json& j, const std::string& path)
{
    if (!j.is_string()) bad(path, "expected a string");
    return j.get<std::string>();
}

Vec2 read_vec(const json& j, const std::string& path)
{
    if (!j.is_array() || j.size() != 2) bad(path, "expected [x, y]");
    return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
}

GeoTransform read_transform(const json& j, const std::string& path)
{
    if (!j.is_array() || j.size() != 6) bad(path, "expected 6 affine coefficients");
    std::array<double, 6> c{};
    for (std::size_t k = 0; k < 6; ++k) c[k] = number(j[k], path);
    return GeoTransform::from_coefficients(c);
}

OriginPolicy read_policy(const json& j, const std::string& path)
{
    const std::string kind = text(at(j, "policy", path), path + ".policy");
    if (kind == "centered") return Centered{};
    if (kind != "corner") bad(path + ".policy", "expected centered or corner");
    CornerAnchored a;
    a.offset = read_vec(at(j, "offset", path), path + ".offset");
    const std::string frame = text(at(j, "frame", path), path + ".frame");
    if (frame != "origin" && frame != "center") bad(path + ".frame", "expected origin or center");
    a.frame = frame == "center" ? AnchorFrame::RasterCenter : AnchorFrame::RasterOrigin;
    return a;
}

SchemeSpec read_spec(const json& j, const std::string& path)
{
    SchemeSpec spec;
    const std::string unit = text(at(j, "unit", path), path + ".unit");
    if (unit != "m" && unit != "px") bad(path + ".unit", "expected m or px");
    spec.unit = unit == "m" ? LengthUnit::Meters : LengthUnit::Pixels;
    spec.tile_extent = read_vec(at(j, "tile_extent", path), path + ".tile_extent");
    spec.stride = read_vec(at(j, "stride", path), path + ".stride");
    try {
        spec.rounding = parse_rounding(text(at(j, "rounding", path), path + ".rounding"));
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        bad(path + ".rounding", e.what());
    }
    spec.origin = read_policy(at(j, "origin", path), path + ".origin");
    return spec;
}

RasterMeta read_raster(const json& j)
{
    RasterMeta meta;
    meta.extent_px = {integer(at(j, "width", "raster"), "raster.width"),
                      integer(at(j, "height", "raster"), "raster.height")};
    meta.gsd = read_vec(at(j, "gsd", "raster"), "raster.gsd");
    meta.gsd_explicit = true;
    meta.geotransform = read_transform(at(j, "transform", "raster"), "raster.transform");
    meta.crs = text(at(j, "crs", "raster"), "raster.crs");
    try {
        meta.units = parse_crs_units(text(at(j, "units", "raster"), "raster.units"));
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        bad("raster.units", e.what());
    }
    if (auto it = j.find("nodata"); it != j.end() && !it->is_null())
        meta.nodata = static_cast<int>(integer(*it, "raster.nodata"));
    try {
        meta.validate();
    } catch (const Error& e) {
        bad("raster", e.what());
    }
    return meta;
}

} // namespace

std::string to_string(const OriginPolicy& policy)
{
    if (const auto* a = std::get_if<CornerAnchored>(&policy))
        return a->frame == AnchorFrame::RasterCenter ? "raster-center" : "corner";
    return "center";
}

TileManifest TileManifest::create(std::string raster_id, const RasterMeta& raster, const SchemeSpec& requested,
                                  int stride_divisor, const std::optional<ModelSpec>& model)
{
    raster.validate();
    TileManifest m;
    m.raster_id = std::move(raster_id);
    m.raster = raster;
    m.requested = requested;
    m.stride_divisor = stride_divisor;
    m.scheme = build_scheme(raster.extent_px.as_vec(), to_pixel_spec(requested, raster.gsd));
    m.model_input = model;
    for (TileRef& tile : enumerate_tiles(m.scheme)) {
        const GeoTransform georef =
            model ? tile_georef(raster.geotransform, tile, model) : window_georef(raster.geotransform, tile.window);
        m.tiles.push_back({std::move(tile), georef});
    }
    return m;
}

void TileManifest::validate() const
{
    if (version != kManifestVersion) throw ParseError("manifest: unsupported version " + std::to_string(version));
    if (static_cast<std::int64_t>(tiles.size()) != scheme.total())
        throw ParseError("manifest: " + std::to_string(tiles.size()) + " tiles listed but scheme has " +
                         std::to_string(scheme.total()));
    std::set<std::string> ids;
    for (const ManifestTile& t : tiles) {
        if (!ids.insert(t.tile.id).second) throw ParseError("manifest: duplicate tile id '" + t.tile.id + "'");
    }
}

std::string to_json(const TileManifest& m)
{
    json j;
    j["version"] = m.version;
    j["raster_id"] = m.raster_id;
    j["raster"] = raster_json(m.raster);
    j["scheme"] = {{"requested", spec_json(m.requested)},
                   {"resolved", spec_json(m.scheme.spec)},
                   {"stride_divisor", m.stride_divisor},
                   {"counts", json::array({m.scheme.counts.x, m.scheme.counts.y})},
                   {"offset_px", vec(m.scheme.offset)}};
    j["model_input"] =
        m.model_input ? json::array({m.model_input->width, m.model_input->height}) : json(nullptr);
    j["tile_dir"] = m.tile_dir;
    j["prediction_dir"] = m.prediction_dir;
    j["image_format"] = m.image_format;
    json tiles = json::array();
    for (const ManifestTile& t : m.tiles) {
        const PixelWindow& w = t.tile.window;
        tiles.push_back({{"id", t.tile.id},
                         {"index", json::array({t.tile.index.i, t.tile.index.j})},
                         {"origin_px", vec(t.tile.origin_px)},
                         {"extent_px", vec(t.tile.extent_px)},
                         {"window", json::array({w.x0, w.y0, w.x1, w.y1})},
                         {"georef", coefficients(t.georef)}});
    }
    j["tiles"] = std::move(tiles);
    return j.dump(2) + "\n";
}

TileManifest manifest_from_json(std::string_view text_in)
{
    json j;
    try {
        j = json::parse(text_in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("manifest is not valid JSON: ") + e.what(), e.byte);
    }
    TileManifest m;
    m.version = static_cast<int>(integer(at(j, "version", "$"), "version"));
    if (m.version != kManifestVersion) bad("version", "unsupported manifest version");
    m.raster_id = text(at(j, "raster_id", "$"), "raster_id");
    m.raster = read_raster(at(j, "raster", "$"));

    const json& scheme = at(j, "scheme", "$");
    m.requested = read_spec(at(scheme, "requested", "scheme"), "scheme.requested");
    const SchemeSpec resolved = read_spec(at(scheme, "resolved", "scheme"), "scheme.resolved");
    m.stride_divisor = static_cast<int>(integer(at(scheme, "stride_divisor", "scheme"), "scheme.stride_divisor"));
    try {
        m.scheme = build_scheme(m.raster.extent_px.as_vec(), resolved);
    } catch (const Error& e) {
        bad("scheme.resolved", e.what());
    }
    const json& counts = at(scheme, "counts", "scheme");
    if (!counts.is_array() || counts.size() != 2 || integer(counts[0], "scheme.counts") != m.scheme.counts.x ||
        integer(counts[1], "scheme.counts") != m.scheme.counts.y)
        bad("scheme.counts", "does not match the resolved scheme");

    const json& model = at(j, "model_input", "$");
    if (!model.is_null()) {
        if (!model.is_array() || model.size() != 2) bad("model_input", "expected [width, height] or null");
        m.model_input = ModelSpec{integer(model[0], "model_input[0]"), integer(model[1], "model_input[1]")};
        if (m.model_input->width <= 0 || m.model_input->height <= 0) bad("model_input", "must be positive");
    }
    m.tile_dir = text(at(j, "tile_dir", "$"), "tile_dir");
    m.prediction_dir = text(at(j, "prediction_dir", "$"), "prediction_dir");
    m.image_format = text(at(j, "image_format", "$"), "image_format");

    const json& tiles = at(j, "tiles", "$");
    if (!tiles.is_array()) bad("tiles", "expected an array");
    for (std::size_t k = 0; k < tiles.size(); ++k) {
        const std::string p = "tiles[" + std::to_string(k) + "]";
        const json& t = tiles[k];
        ManifestTile mt;
        mt.tile.id = text(at(t, "id", p), p + ".id");
        const json& index = at(t, "index", p);
        if (!index.is_array() || index.size() != 2) bad(p + ".index", "expected [i, j]");
        mt.tile.index = {integer(index[0], p + ".index"), integer(index[1], p + ".index")};
        mt.tile.origin_px = read_vec(at(t, "origin_px", p), p + ".origin_px");
        mt.tile.extent_px = read_vec(at(t, "extent_px", p), p + ".extent_px");
        const json& w = at(t, "window", p);
        if (!w.is_array() || w.size() != 4) bad(p + ".window", "expected [x0, y0, x1, y1]");
        mt.tile.window = {integer(w[0], p + ".window"), integer(w[1], p + ".window"), integer(w[2], p + ".window"),
                          integer(w[3], p + ".window")};
        mt.georef = read_transform(at(t, "georef", p), p + ".georef");
        m.tiles.push_back(std::move(mt));
    }
    m.validate();
    return m;
}

void write_manifest(const TileManifest& manifest, const std::filesystem::path& path)
{
    manifest.validate();
    write_file_text(path, to_json(manifest));
}

TileManifest read_manifest(const std::filesystem::path& path)
{
    const std::vector<std::uint8_t> bytes = read_file_bytes(path);
    return manifest_from_json(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

} // namespace eotile
