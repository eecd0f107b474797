#include "options.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "eotile/error.hpp"

namespace eotile::cli {

namespace {

std::string scalar_text(const nlohmann::json& v)
{
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
}

} // namespace

std::string JsonConfig::to_config(const CLI::App* app, bool default_also, bool, std::string) const
{
    nlohmann::json j = nlohmann::json::object();
    for (const CLI::Option* opt : app->get_options({})) {
        if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
        const std::string name = opt->get_lnames().front();
        if (opt->count() > 0) {
            const auto& res = opt->results();
            if (res.size() == 1) j[name] = res.front();
            else j[name] = res;
        } else if (default_also && !opt->get_default_str().empty()) {
            j[name] = opt->get_default_str();
        }
    }
    return j.dump(2) + "\n";
}

std::vector<CLI::ConfigItem> JsonConfig::from_config(std::istream& input) const
{
    nlohmann::json j;
    try {
        input >> j;
    } catch (const nlohmann::json::exception& e) {
        throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    std::vector<CLI::ConfigItem> parsed;
    for (const auto& [key, value] : j.items()) {
        CLI::ConfigItem item;
        if (!section_.empty()) item.parents = {section_};
        item.name = key;
        std::replace(item.name.begin(), item.name.end(), '_', '-');
        if (value.is_array()) {
            for (const auto& v : value) item.inputs.push_back(scalar_text(v));
        } else if (value.is_object() || value.is_null()) {
            throw CLI::ConversionError("config key '" + key + "' must be a scalar or an array");
        } else {
            item.inputs.push_back(scalar_text(value));
        }
        parsed.push_back(std::move(item));
    }
    return parsed;
}

void enable_json_config(CLI::App& app, const std::string& section)
{
    app.set_config("--config", "", "JSON file with option values; command line flags win");
    app.config_formatter(std::make_shared<JsonConfig>(section));
}

void add_scheme_options(CLI::App& app, SchemeOptions& o, bool with_model)
{
    auto* tm = app.add_option("--tile-m", o.tile_m, "Tile extent in meters (metric scheme)")
                   ->check(CLI::PositiveNumber);
    auto* tp = app.add_option("--tile-px", o.tile_px, "Tile extent in pixels (pixel scheme)")
                   ->check(CLI::PositiveNumber);
    tm->excludes(tp);
    app.add_option("--stride-div", o.stride_div, "Stride divisor m: stride = extent / m")
        ->check(CLI::Range(1, 64))
        ->capture_default_str();
    app.add_option("--rounding", o.rounding, "Tile count rounding")
        ->check(CLI::IsMember({"floor", "ceil"}))
        ->capture_default_str();
    app.add_option("--anchor", o.anchor,
                   "Tile placement: centered in the raster, a lattice through a corner offset, or a lattice "
                   "through an offset from the raster center")
        ->check(CLI::IsMember({"center", "corner", "raster-center"}))
        ->capture_default_str();
    app.add_option("--anchor-offset", o.anchor_offset, "Lattice anchor offset x,y in scheme units")
        ->expected(2)
        ->delimiter(',');
    app.add_option("--gsd", o.gsd, "Ground sampling distance override, meters per pixel")
        ->check(CLI::PositiveNumber);
    if (with_model)
        app.add_option("--model-px", o.model_px, "Model input size; tiles are resampled to it")
            ->check(CLI::PositiveNumber);
    app.add_flag("--include-partial", o.include_partial, "Keep partial tiles in baseline schemes");
}

SchemeSpec requested_spec(const SchemeOptions& o)
{
    if (o.tile_m.has_value() == o.tile_px.has_value())
        throw_invalid("exactly one of --tile-m and --tile-px is required");
    const double t = o.tile_m ? *o.tile_m : static_cast<double>(*o.tile_px);
    const LengthUnit unit = o.tile_m ? LengthUnit::Meters : LengthUnit::Pixels;
    OriginPolicy origin = Centered{};
    if (o.anchor != "center") {
        Vec2 offset;
        if (o.anchor_offset.size() == 2) offset = {o.anchor_offset[0], o.anchor_offset[1]};
        origin = CornerAnchored{offset, o.anchor == "raster-center" ? AnchorFrame::RasterCenter
                                                                   : AnchorFrame::RasterOrigin};
    } else if (!o.anchor_offset.empty()) {
        throw_invalid("--anchor-offset needs --anchor corner or raster-center");
    }
    return SchemeSpec::with_stride_divisor({t, t}, o.stride_div, parse_rounding(o.rounding), origin, unit);
}

std::optional<ModelSpec> model_spec(const SchemeOptions& o)
{
    if (!o.model_px) return std::nullopt;
    return ModelSpec{*o.model_px, *o.model_px};
}

RasterSource open_raster(const std::string& path, const std::optional<double>& gsd)
{
    RasterSource src = RasterSource::open(path);
    if (gsd) src.override_gsd({*gsd, *gsd});
    return src;
}

void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& job)
{
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) job(i);
        });
}

std::string raster_id_for(const std::string& path) { return std::filesystem::path(path).stem().string(); }

} // namespace eotile::cli
