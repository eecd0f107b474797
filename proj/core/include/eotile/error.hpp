#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace eotile {

enum class ErrorCode {
    InvalidArgument,
    ParseError,
    MissingGeoreference,
    UnsupportedCrs,
    AlignmentError,
    MissingTile,
    Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for all library failures; carries a machine-readable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Thrown by the binary and JSON parsers. `offset()` is the byte offset of
/// the offending structure (0 when not applicable, e.g. JSON schema errors).
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t offset = 0);

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

[[noreturn]] void throw_invalid(const std::string& message);

} // namespace eotile
