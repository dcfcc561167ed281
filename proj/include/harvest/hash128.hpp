#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>

namespace harvest {

struct Hash128 {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;

    friend bool operator==(const Hash128&, const Hash128&) = default;
    friend auto operator<=>(const Hash128&, const Hash128&) = default;
};

// MurmurHash3 x64 128-bit.
Hash128 hash128(const void* data, std::size_t len, std::uint64_t seed = 0);

inline Hash128 hash128(std::string_view s, std::uint64_t seed = 0) {
    return hash128(s.data(), s.size(), seed);
}

struct Hash128Hasher {
    std::size_t operator()(const Hash128& h) const noexcept {
        return static_cast<std::size_t>(h.lo);
    }
};

}  // namespace harvest
