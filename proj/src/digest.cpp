#include "soata/digest.hpp"

namespace soata {

std::string hex64(std::uint64_t v) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    }
    return out;
}

std::string content_id(std::string_view prefix, std::string_view content) {
    return std::string(prefix) + hex64(fnv1a64(content));
}

} // namespace soata
