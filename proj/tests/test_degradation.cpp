#include <doctest.h>

#include <cmath>
#include <vector>

#include "hirdiff/degradation.hpp"
#include "hirdiff/errors.hpp"
#include "hirdiff/kernels.hpp"
#include "hirdiff/rng.hpp"
#include "hirdiff/tensor.hpp"

using namespace hirdiff;

namespace {

Cube random_cube(std::size_t h, std::size_t w, std::size_t b, std::uint64_t seed) {
    Rng rng(seed);
    Cube x(h, w, b);
    for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
    return x;
}

double dot_cubes(const Cube& a, const Cube& b) {
    return kernels::dot(a.data(), b.data(), a.size());
}

void check_adjoint(const DegradationOp& op, std::size_t h, std::size_t w, std::size_t b,
                   std::uint64_t seed) {
    const Cube x = random_cube(h, w, b, seed);
    const Cube hx = op.apply(x);
    const Cube y = random_cube(hx.h(), hx.w(), hx.bands(), seed + 1000);
    const double lhs = dot_cubes(hx, y);
    const double rhs = dot_cubes(x, op.adjoint(y));
    const double scale = frobenius_norm(x) * frobenius_norm(y);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * scale);
}

} // namespace

TEST_CASE("identity passes cubes through untouched in both directions") {
    const DegradationOp op = DegradationOp::identity(25.0);
    const Cube x = random_cube(6, 7, 3, 1);
    CHECK(op.apply(x).values() == x.values());
    CHECK(op.adjoint(x).values() == x.values());
    CHECK(op.sigma255() == 25.0);
}

TEST_CASE("every operator kind satisfies the adjoint dot-product identity") {
    check_adjoint(DegradationOp::identity(), 12, 10, 4, 10);
    check_adjoint(DegradationOp::blur_downsample(gaussian_kernel(9, 2.0), 2), 16, 20, 3, 11);
    check_adjoint(DegradationOp::blur_downsample(gaussian_kernel(5, 4.0), 4), 16, 24, 2, 12);
    check_adjoint(DegradationOp::masked(random_mask(9, 11, 3, 0.8, 5)), 9, 11, 3, 13);
}

TEST_CASE("blur_downsample output and input shapes are scale-linked") {
    const DegradationOp op = DegradationOp::blur_downsample(gaussian_kernel(9, 2.0), 2);
    std::size_t oh = 0, ow = 0;
    op.output_shape(16, 20, oh, ow);
    CHECK(oh == 8);
    CHECK(ow == 10);
    std::size_t h = 0, w = 0;
    op.input_shape(8, 10, h, w);
    CHECK(h == 16);
    CHECK(w == 20);
    const Cube y = op.apply(random_cube(16, 20, 3, 14));
    CHECK(y.h() == 8);
    CHECK(y.w() == 10);
    CHECK(y.bands() == 3);
}

TEST_CASE("blur_downsample rejects indivisible spatial extents") {
    const DegradationOp op = DegradationOp::blur_downsample(gaussian_kernel(3, 1.0), 4);
    CHECK_THROWS_AS(op.apply(random_cube(10, 8, 1, 15)), ShapeError);
    std::size_t oh, ow;
    CHECK_THROWS_AS(op.output_shape(10, 8, oh, ow), ShapeError);
}

TEST_CASE("operator factories validate their inputs") {
    CHECK_THROWS_AS(DegradationOp::blur_downsample(Mat(2, 2), 2), ValueError);   // even size
    CHECK_THROWS_AS(DegradationOp::blur_downsample(Mat(3, 5), 2), ValueError);   // not square
    Mat unnormalized(3, 3, std::vector<double>(9, 1.0));
    CHECK_THROWS_AS(DegradationOp::blur_downsample(unnormalized, 2), ValueError);
    CHECK_THROWS_AS(DegradationOp::blur_downsample(gaussian_kernel(3, 1.0), 0), ValueError);

    Cube bad_mask(2, 2, 1);
    bad_mask(0, 0, 0) = 0.5;
    CHECK_THROWS_AS(DegradationOp::masked(bad_mask), ValueError);
}

TEST_CASE("masking zeroes exactly the masked samples and is self-adjoint") {
    const Cube mask = random_mask(8, 8, 2, 0.75, 3);
    const DegradationOp op = DegradationOp::masked(mask);
    const Cube x = random_cube(8, 8, 2, 16);
    const Cube y = op.apply(x);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(y.data()[i] == x.data()[i] * mask.data()[i]);
    CHECK(op.adjoint(x).values() == op.apply(x).values());
}

TEST_CASE("gaussian kernels are normalized, positive, and symmetric") {
    for (const auto& [size, std_dev] : std::vector<std::pair<std::size_t, double>>{
             {3, 0.5}, {9, 2.0}, {13, 4.0}}) {
        CAPTURE(size);
        const Mat k = gaussian_kernel(size, std_dev);
        double sum = 0.0;
        for (double v : k.values()) {
            CHECK(v > 0.0);
            sum += v;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        for (std::size_t i = 0; i < size; ++i)
            for (std::size_t j = 0; j < size; ++j) {
                CHECK(k(i, j) == k(j, i));
                CHECK(k(i, j) == k(size - 1 - i, j));
            }
    }
    CHECK_THROWS_AS(gaussian_kernel(4, 1.0), ValueError);
    CHECK_THROWS_AS(gaussian_kernel(3, 0.0), ValueError);
}

TEST_CASE("random_mask hits the exact zero count, deterministically") {
    const Cube m1 = random_mask(10, 10, 3, 0.9, 42);
    const Cube m2 = random_mask(10, 10, 3, 0.9, 42);
    CHECK(m1.values() == m2.values());
    std::size_t zeros = 0;
    for (double v : m1.values()) {
        CHECK((v == 0.0 || v == 1.0));
        zeros += v == 0.0;
    }
    CHECK(zeros == 270);
    CHECK_THROWS_AS(random_mask(4, 4, 1, 1.0, 0), ValueError);
    CHECK_THROWS_AS(random_mask(4, 4, 1, -0.1, 0), ValueError);
}

TEST_CASE("gaussian noise has the requested scale and a zero-sigma fast path") {
    const Cube x = random_cube(32, 32, 8, 17);
    const Cube same = add_gaussian_noise(x, 0.0, 5);
    CHECK(same.values() == x.values());

    const double sigma255 = 30.0;
    const Cube noisy = add_gaussian_noise(x, sigma255, 6);
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = noisy.data()[i] - x.data()[i];
        sum += d;
        sumsq += d * d;
    }
    const double n = static_cast<double>(x.size());
    const double want_var = (sigma255 / 255.0) * (sigma255 / 255.0);
    CHECK(std::abs(sum / n) < 3.0 * std::sqrt(want_var / n));
    CHECK(sumsq / n == doctest::Approx(want_var).epsilon(0.05));
}
