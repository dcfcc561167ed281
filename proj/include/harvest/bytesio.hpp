#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace harvest::bytesio {

// Little-endian, append-to-string primitives shared by the binary state
// formats (dedup state, pipeline checkpoint).

inline void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}

inline void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}

inline std::uint32_t get_u32(std::string_view bytes, std::size_t offset) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset + i]))
             << (8 * i);
    }
    return v;
}

inline std::uint64_t get_u64(std::string_view bytes, std::size_t offset) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[offset + i]))
             << (8 * i);
    }
    return v;
}

}  // namespace harvest::bytesio
