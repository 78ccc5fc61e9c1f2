#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "hirdiff/degradation.hpp"
#include "hirdiff/errors.hpp"
#include "hirdiff/metrics.hpp"
#include "hirdiff/rng.hpp"

using namespace hirdiff;

namespace {

Cube random_cube(std::size_t h, std::size_t w, std::size_t b, std::uint64_t seed) {
    Rng rng(seed);
    Cube x(h, w, b);
    for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] = 0.5 + 0.15 * rng.normal();
    return x;
}

// Direct definition: per-band MSE loop, then band-mean of the dB values.
double psnr_oracle(const Cube& r, const Cube& t) {
    double total = 0.0;
    for (std::size_t b = 0; b < r.bands(); ++b) {
        double mse = 0.0;
        for (std::size_t m = 0; m < r.h(); ++m)
            for (std::size_t n = 0; n < r.w(); ++n) {
                const double d = r(m, n, b) - t(m, n, b);
                mse += d * d;
            }
        mse /= static_cast<double>(r.h() * r.w());
        total += std::min(100.0, mse < 1e-10 ? 100.0 : 10.0 * std::log10(1.0 / mse));
    }
    return total / static_cast<double>(r.bands());
}

// Direct windowed-statistics SSIM at every valid window position.
double ssim_oracle(const Cube& r, const Cube& t) {
    const std::size_t win = 11;
    const double c1 = 1e-4, c2 = 9e-4, std_dev = 1.5;
    std::vector<double> wgt(win * win);
    double wsum = 0.0;
    for (std::size_t i = 0; i < win; ++i)
        for (std::size_t j = 0; j < win; ++j) {
            const double di = static_cast<double>(i) - 5.0, dj = static_cast<double>(j) - 5.0;
            wgt[i * win + j] = std::exp(-(di * di + dj * dj) / (2 * std_dev * std_dev));
            wsum += wgt[i * win + j];
        }
    for (double& v : wgt) v /= wsum;

    double total = 0.0;
    for (std::size_t b = 0; b < r.bands(); ++b) {
        double band = 0.0;
        std::size_t count = 0;
        for (std::size_t m = 0; m + win <= r.h(); ++m)
            for (std::size_t n = 0; n + win <= r.w(); ++n) {
                double mr = 0, mt = 0, vr = 0, vt = 0, cov = 0;
                for (std::size_t i = 0; i < win; ++i)
                    for (std::size_t j = 0; j < win; ++j) {
                        mr += wgt[i * win + j] * r(m + i, n + j, b);
                        mt += wgt[i * win + j] * t(m + i, n + j, b);
                    }
                for (std::size_t i = 0; i < win; ++i)
                    for (std::size_t j = 0; j < win; ++j) {
                        const double dr = r(m + i, n + j, b) - mr;
                        const double dt = t(m + i, n + j, b) - mt;
                        vr += wgt[i * win + j] * dr * dr;
                        vt += wgt[i * win + j] * dt * dt;
                        cov += wgt[i * win + j] * dr * dt;
                    }
                band += ((2 * mr * mt + c1) * (2 * cov + c2)) /
                        ((mr * mr + mt * mt + c1) * (vr + vt + c2));
                ++count;
            }
        total += band / static_cast<double>(count);
    }
    return total / static_cast<double>(r.bands());
}

} // namespace

TEST_CASE("identical cubes cap at 100 dB and ssim 1") {
    const Cube x = random_cube(16, 16, 3, 1);
    CHECK(psnr(x, x) == 100.0);
    CHECK(ssim(x, x) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a uniform 0.01 per-band mse reads 20 dB") {
    Cube r(10, 10, 4);
    Cube t = r;
    for (std::size_t i = 0; i < t.size(); ++i) t.data()[i] += 0.1;
    CHECK(psnr(r, t) == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("psnr matches the scalar loop oracle") {
    const Cube r = random_cube(20, 24, 5, 2);
    const Cube t = random_cube(20, 24, 5, 3);
    CHECK(psnr(r, t) == doctest::Approx(psnr_oracle(r, t)).epsilon(1e-9));
}

TEST_CASE("ssim matches the direct windowed-statistics oracle") {
    const Cube r = random_cube(20, 18, 2, 4);
    const Cube t = random_cube(20, 18, 2, 5);
    CHECK(ssim(r, t) == doctest::Approx(ssim_oracle(r, t)).epsilon(1e-6));
}

TEST_CASE("inverting a non-constant image breaks structure") {
    const Cube r = random_cube(16, 16, 2, 6);
    Cube t = r;
    for (std::size_t i = 0; i < t.size(); ++i) t.data()[i] = 1.0 - t.data()[i];
    CHECK(ssim(r, t) < 1.0);
}

TEST_CASE("both metrics are symmetric") {
    const Cube a = random_cube(14, 14, 3, 7);
    const Cube b = random_cube(14, 14, 3, 8);
    CHECK(psnr(a, b) == psnr(b, a));
    // ssim accumulates window moments in data order, so the two directions
    // can differ by rounding; hold them to relative 1e-12.
    CHECK(ssim(a, b) == doctest::Approx(ssim(b, a)).epsilon(1e-12));
}

TEST_CASE("psnr decreases as the noise level rises") {
    const Cube r = random_cube(24, 24, 4, 9);
    double prev = 1e9;
    for (double sigma : {5.0, 15.0, 45.0}) {
        CAPTURE(sigma);
        const double p = psnr(r, add_gaussian_noise(r, sigma, 10));
        CHECK(p < prev);
        prev = p;
    }
}

TEST_CASE("shape and window preconditions are enforced") {
    const Cube a = random_cube(16, 16, 2, 11);
    CHECK_THROWS_AS(psnr(a, random_cube(16, 15, 2, 12)), ShapeError);
    CHECK_THROWS_AS(ssim(random_cube(8, 16, 1, 13), random_cube(8, 16, 1, 14)), ShapeError);
}

TEST_CASE("csv rows render with an optional header") {
    std::ostringstream os;
    write_score_csv(os, {"cube.hir", "denoise", "T=20", 35.5, 0.9, 1.25}, true);
    write_score_csv(os, {"cube2.hir", "sr", "T=20", 30.0, 0.8, 2.5}, false);
    CHECK(os.str() == "dataset,task,params,psnr,ssim,seconds\n"
                      "cube.hir,denoise,T=20,35.5,0.9,1.25\n"
                      "cube2.hir,sr,T=20,30,0.8,2.5\n");
}
