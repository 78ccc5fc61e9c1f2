#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace hirdiff {

/// Deterministic random source built on std::mt19937_64 with hand-rolled
/// output transforms. The standard pins the mt19937_64 bit stream, but not
/// the distribution adaptors, so uniform/normal draws are implemented here
/// to keep results byte-identical across standard libraries.
///
/// Stream semantics: a generator seeded with the same value produces the
/// same draw sequence; independent sub-streams for one user seed are derived
/// with substream(seed, tag).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Raw 64 uniform bits.
    std::uint64_t bits() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random mantissa bits.
    double uniform();

    /// Uniform integer in [0, n); n > 0. Unbiased via rejection.
    std::uint64_t uniform_index(std::uint64_t n);

    /// Standard normal draw (Box-Muller; the pair's second value is cached).
    double normal();

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

/// Derives the seed for a named sub-stream of a user seed.
/// Mixing is splitmix64(seed ^ fnv1a(tag)); tags in use:
/// "synth.a", "synth.e", "mask", "noise", "init".
std::uint64_t substream(std::uint64_t seed, std::string_view tag);

} // namespace hirdiff
