#pragma once

#include <cstddef>
#include <cstdint>

#include "hirdiff/tensor.hpp"

namespace hirdiff {

struct SynthCube {
    Cube x; // H x W x B, exactly rank k along mode 3
    Cube a; // H x W x k true reduced image
    Mat e;  // B x k true coefficient matrix
};

// Gaussian-smoothed white noise per channel, each channel affinely mapped to
// [lo, hi]. Channels are linearly independent, so a ×3 product with a full
// column rank matrix has exact mode-3 rank k.
Cube smooth_random_image(std::size_t h, std::size_t w, std::size_t k, std::uint64_t seed,
                         double smooth_std = 2.0, double lo = 0.1, double hi = 0.9);

// Benchmark cube X = A x_3 E with smooth random A and a well conditioned
// nonnegative E whose columns are overlapping spectral lobes spread across
// the band axis. Deterministic in the seed.
SynthCube synth_cube(std::size_t h, std::size_t w, std::size_t b, std::size_t k,
                     std::uint64_t seed);

// Band selection stress cube, always 16 bands, rank 3. Nearly every band
// shares one base signature; only narrow lobes around bands 3 and 10 carry
// the second and third components. No arithmetic-progression triple of band
// indices hits both lobe centers, so equal-interval selections are close to
// degenerate while a conditioning-aware selection is not.
SynthCube synth_clustered_cube(std::size_t h, std::size_t w, std::uint64_t seed);

} // namespace hirdiff
