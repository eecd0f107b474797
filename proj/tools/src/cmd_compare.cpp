// Scheme comparison: pixel-grid baseline, slippy-map tiles and metric (EOT)
// tiles over the same rasters. Tile extent is the edge of the equal-area
// square, sqrt(extent_x * extent_y), in meters.

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "commands.hpp"
#include "eotile/cli/cli.hpp"
#include "eotile/error.hpp"
#include "eotile/image_io.hpp"
#include "eotile/mercator.hpp"

namespace eotile::cli {

namespace {

struct Footprint {
    RealRect px;
    double extent_m;
};

struct SchemeTiles {
    std::string scheme;
    std::vector<Footprint> tiles;
};

double axis_union(std::vector<std::pair<double, double>> spans, double limit)
{
    for (auto& s : spans) s = {std::clamp(s.first, 0.0, limit), std::clamp(s.second, 0.0, limit)};
    std::sort(spans.begin(), spans.end());
    double total = 0.0;
    double lo = 0.0;
    double hi = -1.0;
    for (const auto& [a, b] : spans) {
        if (b <= a) continue;
        if (a > hi) {
            if (hi > lo) total += hi - lo;
            lo = a;
            hi = b;
        } else {
            hi = std::max(hi, b);
        }
    }
    if (hi > lo) total += hi - lo;
    return total;
}

// Every scheme here is a product of per-axis intervals, so coverage factors.
double covered_fraction(const std::vector<Footprint>& tiles, const RasterSize& size)
{
    if (tiles.empty()) return 0.0;
    std::vector<std::pair<double, double>> xs;
    std::vector<std::pair<double, double>> ys;
    for (const Footprint& f : tiles) {
        xs.emplace_back(f.px.origin.x, f.px.max().x);
        ys.emplace_back(f.px.origin.y, f.px.max().y);
    }
    const Vec2 r = size.as_vec();
    return axis_union(xs, r.x) / r.x * (axis_union(ys, r.y) / r.y);
}

double overhang_area(const Footprint& f, const RasterSize& size)
{
    const Vec2 r = size.as_vec();
    const Vec2 hi = f.px.max();
    const double ix = std::max(0.0, std::min(hi.x, r.x) - std::max(f.px.origin.x, 0.0));
    const double iy = std::max(0.0, std::min(hi.y, r.y) - std::max(f.px.origin.y, 0.0));
    return f.px.extent.x * f.px.extent.y - ix * iy;
}

void extent_stats(const std::vector<double>& v, double& mean, double& stddev)
{
    mean = 0.0;
    stddev = 0.0;
    if (v.empty()) return;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    stddev = std::sqrt(ss / static_cast<double>(v.size()));
}

double metric_edge(Vec2 extent_px, Vec2 gsd) { return std::sqrt(extent_px.x * gsd.x * extent_px.y * gsd.y); }

std::vector<SchemeTiles> scheme_tiles(const CompareOptions& o, const SchemeSpec& eot, const RasterMeta& meta,
                                      const std::string& path, Context& ctx)
{
    std::vector<SchemeTiles> out;

    SchemeTiles pixel{"pixel", {}};
    const double px = static_cast<double>(o.scheme.tile_px.value_or(256));
    for (const TileRef& t : pixel_grid_tiles(meta, {px, px}, o.scheme.include_partial))
        pixel.tiles.push_back({{t.origin_px, t.extent_px}, metric_edge(t.extent_px, meta.gsd)});
    out.push_back(std::move(pixel));

    SchemeTiles merc{"mercator-z" + std::to_string(o.zoom), {}};
    try {
        for (const MercatorTile& t : mercator_tiles_for_bounds(meta, o.zoom, o.scheme.include_partial)) {
            const RealRect b = tile_bounds_lonlat(t.key);
            const double ym = (lonlat_to_mercator(b.origin).y + lonlat_to_mercator(b.max()).y) / 2.0;
            const double lat = mercator_to_lonlat({0.0, ym}).y;
            merc.tiles.push_back({t.window_px, mercator_tile_extent_m(o.zoom, lat)});
        }
        out.push_back(std::move(merc));
    } catch (const Error& e) {
        if (e.code() != ErrorCode::UnsupportedCrs) throw;
        ctx.log.warn(path + ": no mercator rows: " + e.what());
    }

    if (!meta.metric_gsd_known())
        throw Error(ErrorCode::MissingGeoreference,
                    path + ": CRS '" + meta.crs + "' has degree units; metric tiles need a GSD (sidecar or --gsd)");
    SchemeTiles e{"eot", {}};
    const TilingScheme scheme = build_scheme(meta.extent_px.as_vec(), to_pixel_spec(eot, meta.gsd));
    for (const TileRef& t : enumerate_tiles(scheme))
        e.tiles.push_back({{t.origin_px, t.extent_px}, metric_edge(t.extent_px, meta.gsd)});
    out.push_back(std::move(e));
    return out;
}

} // namespace

std::string compare_csv(const std::vector<CompareRow>& rows)
{
    std::string out = "raster,scheme,tile_count,extent_mean_m,extent_std_m,covered_fraction,overhang_fraction\n";
    char line[512];
    for (const CompareRow& r : rows) {
        std::snprintf(line, sizeof line, "%s,%s,%lld,%.9g,%.9g,%.9g,%.9g\n", r.raster.c_str(), r.scheme.c_str(),
                      static_cast<long long>(r.tile_count), r.extent_mean_m, r.extent_std_m, r.covered_fraction,
                      r.overhang_fraction);
        out += line;
    }
    return out;
}

std::vector<CompareRow> parse_compare_csv(const std::string& csv)
{
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    std::vector<CompareRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
        if (f.size() != 7) throw ParseError("compare row has " + std::to_string(f.size()) + " fields: " + line);
        rows.push_back({f[0], f[1], std::stoll(f[2]), std::stod(f[3]), std::stod(f[4]), std::stod(f[5]),
                        std::stod(f[6])});
    }
    return rows;
}

int run_compare(const CompareOptions& o, Context& ctx)
{
    if (!o.scheme.tile_m) throw_invalid("compare needs --tile-m for the metric scheme");
    SchemeOptions eot_opts = o.scheme;
    eot_opts.tile_px.reset();
    const SchemeSpec eot = requested_spec(eot_opts);

    struct Result {
        std::vector<SchemeTiles> schemes;
        RasterSize size;
        int code = kExitOk;
    };
    std::vector<Result> results(o.rasters.size());
    parallel_for(o.rasters.size(), o.jobs, [&](std::size_t i) {
        const std::string& path = o.rasters[i];
        try {
            const RasterMeta meta = open_raster(path, o.scheme.gsd).meta();
            results[i].size = meta.extent_px;
            results[i].schemes = scheme_tiles(o, eot, meta, path, ctx);
        } catch (const Error& e) {
            std::string msg = e.what();
            if (msg.find(path) == std::string::npos) msg = path + ": " + msg;
            ctx.log.error(msg);
            results[i].code = kExitInput;
        }
    });

    std::vector<CompareRow> rows;
    struct Summary {
        std::vector<double> extents;
        double covered_sum = 0.0;
        int rasters = 0;
        double area = 0.0;
        double overhang = 0.0;
    };
    std::vector<std::string> order;
    std::map<std::string, Summary> summary;
    int worst = kExitOk;
    for (std::size_t i = 0; i < results.size(); ++i) {
        worst = std::max(worst, results[i].code);
        for (const SchemeTiles& s : results[i].schemes) {
            CompareRow row{raster_id_for(o.rasters[i]), s.scheme, static_cast<std::int64_t>(s.tiles.size())};
            std::vector<double> extents;
            double area = 0.0;
            double overhang = 0.0;
            for (const Footprint& f : s.tiles) {
                extents.push_back(f.extent_m);
                area += f.px.extent.x * f.px.extent.y;
                overhang += overhang_area(f, results[i].size);
            }
            extent_stats(extents, row.extent_mean_m, row.extent_std_m);
            row.covered_fraction = covered_fraction(s.tiles, results[i].size);
            row.overhang_fraction = area > 0.0 ? overhang / area : 0.0;
            rows.push_back(row);

            if (!summary.count(s.scheme)) order.push_back(s.scheme);
            Summary& sum = summary[s.scheme];
            sum.extents.insert(sum.extents.end(), extents.begin(), extents.end());
            sum.covered_sum += row.covered_fraction;
            sum.rasters += 1;
            sum.area += area;
            sum.overhang += overhang;
        }
    }
    for (const std::string& name : order) {
        const Summary& sum = summary[name];
        CompareRow row{"*", name, static_cast<std::int64_t>(sum.extents.size())};
        extent_stats(sum.extents, row.extent_mean_m, row.extent_std_m);
        row.covered_fraction = sum.covered_sum / sum.rasters;
        row.overhang_fraction = sum.area > 0.0 ? sum.overhang / sum.area : 0.0;
        rows.push_back(row);
    }

    const std::string csv = compare_csv(rows);
    if (o.out) {
        write_file_text(*o.out, csv);
        ctx.log.info("compare: " + std::to_string(rows.size()) + " rows -> " + *o.out);
    } else {
        ctx.out << csv;
    }
    return worst;
}

} // namespace eotile::cli
