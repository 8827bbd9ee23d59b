#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace planeprop {

/// Invalid construction input: bad grid geometry, non-finite samples, size mismatch.
class validation_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed file content. `offset()` is the byte offset (binary files) or
/// the 1-based line number (text files) where parsing stopped.
class format_error : public std::runtime_error {
public:
    explicit format_error(const std::string& what, std::optional<std::uint64_t> offset = std::nullopt)
        : std::runtime_error(what), offset_(offset) {}

    std::optional<std::uint64_t> offset() const noexcept { return offset_; }

private:
    std::optional<std::uint64_t> offset_;
};

} // namespace planeprop
