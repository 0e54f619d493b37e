#pragma once

#include <cstdint>
#include <string_view>

namespace seqcomplex {

// SplitMix64 (Steele/Lea/Flood). Chosen because its output is fully specified
// by the algorithm, so every stream reproduces bit-identically across
// platforms. Streams are derived from (master seed, stream name): the name is
// FNV-1a hashed, mixed into the seed, and the result is re-scrambled, so
// distinct names give unrelated streams.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

std::uint64_t fnv1a64(std::string_view text);

struct RngStream {
    SplitMix64 gen;

    RngStream(std::uint64_t master_seed, std::string_view stream_name)
        : gen(derive(master_seed, stream_name)) {}

    static std::uint64_t derive(std::uint64_t master_seed, std::string_view stream_name) {
        SplitMix64 mixer(master_seed ^ fnv1a64(stream_name));
        mixer.next();
        return mixer.next();
    }

    std::uint64_t next_u64() { return gen.next(); }

    // Unbiased via rejection; portable (no std::uniform_int_distribution).
    std::uint32_t next_below(std::uint32_t n);

    // Uniform on [0,1) with 53 random bits.
    double next_unit() { return static_cast<double>(gen.next() >> 11) * 0x1.0p-53; }

    int next_sign() { return (gen.next() >> 63) ? 1 : -1; }

    bool next_bool() { return (gen.next() >> 63) != 0; }
};

}  // namespace seqcomplex
