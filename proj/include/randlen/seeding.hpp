#pragma once

#include <cstdint>
#include <random>

namespace randlen::seeding {

// splitmix64 finalizer. Pure integer mixing, identical on every platform.
inline constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derive a child seed from a master seed and up to three stream coordinates
/// (stream tag, column index, replication index, ...). Children of distinct
/// coordinates never share an engine state.
inline constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t a,
                                      std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t h = mix64(seed ^ 0x517cc1b727220a95ULL);
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    h = mix64(h ^ c);
    return h;
}

// Stream tags. Disjoint tags keep logically independent draws on disjoint
// substreams (columns vs term counts vs d vs shared row factors).
enum StreamTag : std::uint64_t {
    kStreamInnovation = 1,
    kStreamInit = 2,
    kStreamColumn = 3,
    kStreamLength = 4,
    kStreamRandomD = 5,
    kStreamFactor = 6,
    kStreamReplication = 7,
    kStreamLengthNeg = 8,
};

/// mt19937_64 wrapped so every variate comes from raw bits: the library's
/// distribution objects are implementation-defined, these draws are not.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on the open interval (0,1), 53-bit resolution. Never 0 or 1,
    /// so logs and reciprocals are always finite.
    double uniform01() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t bits() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace randlen::seeding
