#include <random>
#include <string>
#include <vector>

#include "doctest.h"

#include "harvest/hash128.hpp"

using harvest::Hash128;
using harvest::hash128;

// Vectors frozen from an independent MurmurHash3 x64/128 implementation
// (Rust crate murmur3 0.5.2), itself validated below against the smhasher
// verification constant.
TEST_CASE("hash128 reference vectors") {
    struct Vector {
        std::string input;
        std::uint64_t seed, lo, hi;
    };
    const std::vector<Vector> vectors = {
        {"", 0, 0x0000000000000000ull, 0x0000000000000000ull},
        {"", 1, 0x4610abe56eff5cb5ull, 0x51622daa78f83583ull},
        {"a", 0, 0x85555565f6597889ull, 0xe6b53a48510e895aull},
        {"ab", 0, 0x938b11ea16ed1b2eull, 0xe65ea7019b52d4adull},
        {"abc", 0, 0xb4963f3f3fad7867ull, 0x3ba2744126ca2d52ull},
        {"abcd", 0, 0xb87bb7d64656cd4full, 0xf2003e886073e875ull},
        {"abcdefgh", 0, 0xcc8a0ab037ef8c02ull, 0x48890d60eb6940a1ull},
        {"abcdefghi", 0, 0x0547c0cff13c7964ull, 0x79b53df5b741e033ull},
        {"hello", 0, 0xcbd8a7b341bd9b02ull, 0x5b1e906a48ae1d19ull},
        {"hello, world", 0, 0x342fac623a5ebc8eull, 0x4cdcbc079642414dull},
        {"The quick brown fox jumps over the lazy dog", 0, 0xe34bbc7bbc071b6cull,
         0x7a433ca9c49a9347ull},
        {"The quick brown fox jumps over the lazy dog", 1337, 0xbc718004e0d87ee4ull,
         0xf95a9fc01a181755ull},
        {std::string("\x00\x01\x02\x03\x04\x05\x06\x07\x08\x09\x0a\x0b\x0c\x0d\x0e\x0f"
                     "\x10",
                     17),
         42, 0x8f08f89d332aa1fbull, 0x592bb498cd19df6cull},
        {std::string(40, 'a'), 7, 0xbf5bf7ee7324f8b1ull, 0xab78a413f395681aull},
    };
    for (const auto& v : vectors) {
        CAPTURE(v.input);
        Hash128 h = hash128(v.input, v.seed);
        CHECK(h.lo == v.lo);
        CHECK(h.hi == v.hi);
    }
}

// smhasher's VerificationTest: hash keys {0..i-1} with seed 256-i, hash the
// concatenated digests with seed 0; the published constant for x64/128 is
// 0x6384ba69. Exercises every input length 0..255 and the tail switch.
TEST_CASE("hash128 smhasher verification constant") {
    unsigned char key[256];
    for (int i = 0; i < 256; ++i) key[i] = static_cast<unsigned char>(i);
    std::string digests;
    for (int i = 0; i < 256; ++i) {
        Hash128 h = hash128(key, static_cast<std::size_t>(i),
                            static_cast<std::uint64_t>(256 - i));
        for (int b = 0; b < 8; ++b) digests += static_cast<char>(h.lo >> (8 * b));
        for (int b = 0; b < 8; ++b) digests += static_cast<char>(h.hi >> (8 * b));
    }
    Hash128 final_hash = hash128(digests, 0);
    CHECK((final_hash.lo & 0xffffffffull) == 0x6384ba69ull);
}

TEST_CASE("hash128 basic properties") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> len_dist(0, 300);
    std::uniform_int_distribution<int> byte_dist(0, 255);
    for (int trial = 0; trial < 200; ++trial) {
        std::string data;
        int len = len_dist(rng);
        for (int i = 0; i < len; ++i) data += static_cast<char>(byte_dist(rng));

        // Deterministic.
        CHECK(hash128(data, 3) == hash128(data, 3));
        // Seed-sensitive (some input must exist for seed to matter).
        if (!data.empty()) CHECK(hash128(data, 1) != hash128(data, 2));
        // A copy at a different alignment hashes identically.
        std::string padded = "x" + data;
        CHECK(hash128(padded.data() + 1, data.size(), 3) == hash128(data, 3));
        // Flipping one byte changes the digest.
        if (!data.empty()) {
            std::string mutated = data;
            mutated[static_cast<std::size_t>(trial) % mutated.size()] ^= 0x01;
            CHECK(hash128(mutated, 3) != hash128(data, 3));
        }
    }
}

TEST_CASE("Hash128 ordering is lo-major") {
    Hash128 a{1, 2}, b{2, 1};
    CHECK(a < b);
    CHECK(Hash128{1, 1} < Hash128{1, 2});
    CHECK(harvest::Hash128Hasher{}(Hash128{7, 9}) == 7);
}
