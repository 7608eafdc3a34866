#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace soata {

// FNV-1a, 64 bit. Stable content ids and document digests, not a security hash.
constexpr std::uint64_t fnv1a64(std::string_view data) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v);

// Prefix followed by the 16-digit hex digest of `content`.
std::string content_id(std::string_view prefix, std::string_view content);

} // namespace soata
