#pragma once

#include <iosfwd>
#include <string_view>

namespace eotile::cli {

/// Serialized diagnostics sink shared by worker threads.
class Log {
public:
    explicit Log(std::ostream& sink) : sink_(sink) {}

    void info(std::string_view message) const { write("info", message); }
    void warn(std::string_view message) const { write("warning", message); }
    void error(std::string_view message) const { write("error", message); }

private:
    void write(std::string_view level, std::string_view message) const;

    std::ostream& sink_;
};

} // namespace eotile::cli
