#include "log.hpp"

#include <mutex>
#include <ostream>

namespace eotile::cli {

namespace {
std::mutex log_mutex;
}

void Log::write(std::string_view level, std::string_view message) const
{
    std::lock_guard lock(log_mutex);
    sink_ << "eotile: " << level << ": " << message << '\n';
    sink_.flush();
}

} // namespace eotile::cli
