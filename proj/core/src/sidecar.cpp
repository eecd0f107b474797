#include "eotile/sidecar.hpp"

#include <nlohmann/json.hpp>

#include "eotile/error.hpp"
#include "eotile/image_io.hpp"

namespace eotile {

namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& field, const std::string& why)
{
    throw ParseError("sidecar field '" + field + "': " + why);
}

const json& required(const json& j, const char* field)
{
    auto it = j.find(field);
    if (it == j.end()) field_error(field, "missing");
    return *it;
}

std::int64_t positive_int(const json& j, const char* field)
{
    const json& v = required(j, field);
    if (!v.is_number_integer() || v.get<std::int64_t>() <= 0) field_error(field, "must be a positive integer");
    return v.get<std::int64_t>();
}

std::vector<double> numbers(const json& v, const char* field, std::size_t n)
{
    if (!v.is_array() || v.size() != n) field_error(field, "must be an array of " + std::to_string(n) + " numbers");
    std::vector<double> out;
    for (const json& e : v) {
        if (!e.is_number() || !std::isfinite(e.get<double>())) field_error(field, "must contain finite numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

} // namespace

RasterMeta read_sidecar(std::string_view text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("sidecar is not valid JSON: ") + e.what(), e.byte);
    }
    if (!j.is_object()) throw ParseError("sidecar must be a JSON object");

    if (auto it = j.find("version"); it != j.end()) {
        if (!it->is_number_integer() || it->get<int>() != kSidecarVersion)
            field_error("version", "unsupported schema version (expected " + std::to_string(kSidecarVersion) + ")");
    }

    RasterMeta meta;
    meta.extent_px = {positive_int(j, "width"), positive_int(j, "height")};

    const std::vector<double> c = numbers(required(j, "transform"), "transform", 6);
    meta.geotransform = GeoTransform::from_coefficients({c[0], c[1], c[2], c[3], c[4], c[5]});
    if (!meta.geotransform.invertible()) field_error("transform", "is not invertible");

    const json& crs = required(j, "crs");
    if (!crs.is_string()) field_error("crs", "must be a string");
    meta.crs = crs.get<std::string>();

    meta.units = infer_crs_units(meta.crs);
    if (auto it = j.find("units"); it != j.end()) {
        if (!it->is_string()) field_error("units", "must be a string");
        try {
            meta.units = parse_crs_units(it->get<std::string>());
        } catch (const Error&) {
            field_error("units", "expected meters, degrees or unknown");
        }
    }

    if (auto it = j.find("gsd"); it != j.end()) {
        const std::vector<double> g = numbers(*it, "gsd", 2);
        if (!(g[0] > 0) || !(g[1] > 0)) field_error("gsd", "must be positive");
        meta.gsd = {g[0], g[1]};
        meta.gsd_explicit = true;
    } else if (meta.units == CrsUnits::Degrees) {
        field_error("gsd", "required for CRS '" + meta.crs + "' with degree units");
    } else {
        meta.gsd = gsd_from_transform(meta.geotransform);
    }

    if (auto it = j.find("nodata"); it != j.end() && !it->is_null()) {
        if (!it->is_number_integer()) field_error("nodata", "must be an integer");
        meta.nodata = it->get<int>();
    }
    return meta;
}

RasterMeta read_sidecar_file(const std::filesystem::path& path)
{
    const std::vector<std::uint8_t> bytes = read_file_bytes(path);
    return read_sidecar(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

std::string write_sidecar(const RasterMeta& meta)
{
    json j;
    j["version"] = kSidecarVersion;
    j["width"] = meta.extent_px.width;
    j["height"] = meta.extent_px.height;
    j["gsd"] = {meta.gsd.x, meta.gsd.y};
    const auto c = meta.geotransform.coefficients();
    j["transform"] = json::array({c[0], c[1], c[2], c[3], c[4], c[5]});
    j["crs"] = meta.crs;
    j["units"] = to_string(meta.units);
    if (meta.nodata) j["nodata"] = *meta.nodata;
    return j.dump(2) + "\n";
}

std::filesystem::path sidecar_path_for(const std::filesystem::path& raster)
{
    return std::filesystem::path(raster.string() + ".json");
}

} // namespace eotile
