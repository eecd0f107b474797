#include "eotile/error.hpp"

namespace eotile {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::ParseError: return "parse-error";
    case ErrorCode::MissingGeoreference: return "missing-georeference";
    case ErrorCode::UnsupportedCrs: return "unsupported-crs";
    case ErrorCode::AlignmentError: return "alignment-error";
    case ErrorCode::MissingTile: return "missing-tile";
    case ErrorCode::Io: return "io-error";
    }
    return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code)
{
}

ParseError::ParseError(const std::string& message, std::size_t offset)
    : Error(ErrorCode::ParseError, message + " (at byte " + std::to_string(offset) + ")"),
      offset_(offset)
{
}

void throw_invalid(const std::string& message)
{
    throw Error(ErrorCode::InvalidArgument, message);
}

} // namespace eotile
