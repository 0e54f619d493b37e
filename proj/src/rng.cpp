#include "seqcomplex/rng.hpp"

#include <stdexcept>

namespace seqcomplex {

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint32_t RngStream::next_below(std::uint32_t n) {
    if (n == 0) throw std::invalid_argument("next_below(0)");
    // Rejection zone keeps the draw exactly uniform.
    std::uint64_t bound = (~std::uint64_t{0} / n) * n;
    for (;;) {
        std::uint64_t v = gen.next();
        if (v < bound) return static_cast<std::uint32_t>(v % n);
    }
}

}  // namespace seqcomplex
