#include "hirdiff/synth.hpp"

#include <algorithm>
#include <cmath>

#include "hirdiff/degradation.hpp"
#include "hirdiff/errors.hpp"
#include "hirdiff/kernels.hpp"
#include "hirdiff/rng.hpp"

namespace hirdiff {

Cube smooth_random_image(std::size_t h, std::size_t w, std::size_t k, std::uint64_t seed,
                         double smooth_std, double lo, double hi) {
    if (h == 0 || w == 0 || k == 0)
        throw ValueError("smooth_random_image: dimensions must be positive");
    Rng rng(substream(seed, "synth.a"));
    Cube noise(h, w, k);
    for (std::size_t i = 0; i < noise.size(); ++i) noise.data()[i] = rng.normal();

    const std::size_t ks = 2 * static_cast<std::size_t>(std::ceil(3.0 * smooth_std)) + 1;
    const Mat kern = gaussian_kernel(ks, smooth_std);
    Cube a(h, w, k);
    kernels::conv_cube(a.data(), noise.data(), h, w, k, kern.data(), ks);

    for (std::size_t c = 0; c < k; ++c) {
        double* p = a.plane(c);
        const std::size_t hw = h * w;
        double mn = p[0], mx = p[0];
        for (std::size_t i = 1; i < hw; ++i) {
            mn = std::min(mn, p[i]);
            mx = std::max(mx, p[i]);
        }
        if (mx - mn < 1e-300) {
            std::fill(p, p + hw, 0.5 * (lo + hi));
            continue;
        }
        const double scale = (hi - lo) / (mx - mn);
        for (std::size_t i = 0; i < hw; ++i) p[i] = lo + (p[i] - mn) * scale;
    }
    return a;
}

SynthCube synth_cube(std::size_t h, std::size_t w, std::size_t b, std::size_t k,
                     std::uint64_t seed) {
    if (k == 0 || k > b)
        throw ValueError("synth_cube: rank " + std::to_string(k) + " outside [1, " +
                         std::to_string(b) + "]");
    SynthCube s;
    s.a = smooth_random_image(h, w, k, seed);

    Rng rng(substream(seed, "synth.e"));
    s.e = Mat(b, k);
    for (std::size_t j = 0; j < k; ++j) {
        const double center = (static_cast<double>(j) + 0.5) * static_cast<double>(b) /
                              static_cast<double>(k);
        const double sigma = std::max(1.0, static_cast<double>(b) / (2.0 * static_cast<double>(k)));
        for (std::size_t i = 0; i < b; ++i) {
            const double d = static_cast<double>(i) + 0.5 - center;
            s.e(i, j) = 0.05 + std::exp(-d * d / (2.0 * sigma * sigma)) + 0.02 * rng.uniform();
        }
    }
    s.x = mode3_multiply(s.a, s.e);
    return s;
}

SynthCube synth_clustered_cube(std::size_t h, std::size_t w, std::uint64_t seed) {
    constexpr std::size_t kBands = 16;
    constexpr double kCenters[2] = {3.0, 10.0};
    SynthCube s;
    s.a = smooth_random_image(h, w, 3, seed);

    Rng rng(substream(seed, "synth.e"));
    s.e = Mat(kBands, 3);
    for (std::size_t i = 0; i < kBands; ++i) {
        s.e(i, 0) = 1.0;
        for (std::size_t j = 0; j < 2; ++j) {
            const double d = static_cast<double>(i) - kCenters[j];
            // Lobe width 1: one band away keeps 61% response, three bands
            // away 1%, so only bands 2..4 and 9..11 are informative.
            s.e(i, j + 1) = std::exp(-0.5 * d * d) + 0.01 * (2.0 * rng.uniform() - 1.0);
        }
    }
    s.x = mode3_multiply(s.a, s.e);
    return s;
}

} // namespace hirdiff
