#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace harvest {

struct GzipError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Compresses data into a single gzip member (deterministic: fixed level,
// no mtime or name fields).
std::string gzip_compress(std::string_view data);

// Decompresses exactly one gzip member. Truncated or corrupt input, or
// trailing bytes after the member, raise GzipError.
std::string gzip_decompress_member(std::string_view data);

}  // namespace harvest
