#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace coast::util {

// 64-bit FNV-1a. Used for observation digests, spec hashes and goal ids;
// stable across platforms and runs.
constexpr std::uint64_t fnv1a64(std::string_view bytes,
                                std::uint64_t seed = 0xcbf29ce484222325ULL) noexcept {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string to_hex(std::uint64_t value);

inline std::string digest_hex(std::string_view bytes) { return to_hex(fnv1a64(bytes)); }

}  // namespace coast::util
