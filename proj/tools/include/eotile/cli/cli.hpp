#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace eotile::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitInput = 2,
    kExitInternal = 3,
};

/// Full command line entry point. Machine output goes to `out`, diagnostics
/// to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// One CSV row of `eotile compare`.
struct CompareRow {
    std::string raster; ///< raster id, "*" for the cross-raster summary
    std::string scheme; ///< "pixel", "mercator-z<zoom>" or "eot"
    std::int64_t tile_count = 0;
    double extent_mean_m = 0.0;
    double extent_std_m = 0.0;
    double covered_fraction = 0.0;
    double overhang_fraction = 0.0;
};

std::string compare_csv(const std::vector<CompareRow>& rows);
std::vector<CompareRow> parse_compare_csv(const std::string& csv);

} // namespace eotile::cli
