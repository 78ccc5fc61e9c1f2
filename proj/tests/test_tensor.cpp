#include <doctest.h>

#include <limits>
#include <vector>

#include "hirdiff/errors.hpp"
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

} // namespace

TEST_CASE("cube indexing is band-major, row-major within planes") {
    Cube x(2, 3, 2);
    x(1, 2, 1) = 5.0;
    CHECK(x.data()[1 * 6 + 1 * 3 + 2] == 5.0);
    CHECK(x.plane(1)[1 * 3 + 2] == 5.0);
}

TEST_CASE("unfold3 lays bands out as rows and fold3 inverts it") {
    const Cube x = random_cube(4, 5, 3, 1);
    const Mat u = unfold3(x);
    REQUIRE(u.rows() == 3);
    REQUIRE(u.cols() == 20);
    for (std::size_t b = 0; b < 3; ++b)
        for (std::size_t m = 0; m < 4; ++m)
            for (std::size_t n = 0; n < 5; ++n) CHECK(u(b, m * 5 + n) == x(m, n, b));
    const Cube back = fold3(u, 4, 5);
    CHECK(back.values() == x.values());
}

TEST_CASE("mode3 product matches the scalar triple loop") {
    const Cube x = random_cube(3, 4, 2, 2);
    Mat e(5, 2);
    Rng rng(3);
    for (std::size_t i = 0; i < e.size(); ++i) e.data()[i] = rng.normal();
    const Cube out = mode3_multiply(x, e);
    REQUIRE(out.bands() == 5);
    for (std::size_t m = 0; m < 3; ++m)
        for (std::size_t n = 0; n < 4; ++n)
            for (std::size_t j = 0; j < 5; ++j) {
                double want = 0.0;
                for (std::size_t i = 0; i < 2; ++i) want += x(m, n, i) * e(j, i);
                CHECK(out(m, n, j) == doctest::Approx(want).epsilon(1e-14));
            }
}

TEST_CASE("mode3 product rejects a mismatched inner dimension") {
    const Cube x = random_cube(3, 4, 2, 4);
    CHECK_THROWS_AS(mode3_multiply(x, Mat(5, 3)), ShapeError);
}

TEST_CASE("matmul matches the scalar loop and rejects bad shapes") {
    Mat a(2, 3), b(3, 4);
    Rng rng(5);
    for (std::size_t i = 0; i < a.size(); ++i) a.data()[i] = rng.normal();
    for (std::size_t i = 0; i < b.size(); ++i) b.data()[i] = rng.normal();
    const Mat c = matmul(a, b);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            double want = 0.0;
            for (std::size_t k = 0; k < 3; ++k) want += a(i, k) * b(k, j);
            CHECK(c(i, j) == doctest::Approx(want).epsilon(1e-14));
        }
    CHECK_THROWS_AS(matmul(a, Mat(2, 2)), ShapeError);
}

TEST_CASE("extract_bands keeps the requested planes in order") {
    const Cube x = random_cube(4, 4, 6, 6);
    const Cube sel = extract_bands(x, {1, 3, 5});
    REQUIRE(sel.bands() == 3);
    for (std::size_t m = 0; m < 4; ++m)
        for (std::size_t n = 0; n < 4; ++n) {
            CHECK(sel(m, n, 0) == x(m, n, 1));
            CHECK(sel(m, n, 1) == x(m, n, 3));
            CHECK(sel(m, n, 2) == x(m, n, 5));
        }
}

TEST_CASE("extract_bands rejects out-of-range, repeated, and empty index lists") {
    const Cube x = random_cube(2, 2, 4, 7);
    CHECK_THROWS_WITH_AS(extract_bands(x, {0, 4}), doctest::Contains("out of range"), ValueError);
    CHECK_THROWS_WITH_AS(extract_bands(x, {1, 1}), doctest::Contains("duplicate"), ValueError);
    CHECK_THROWS_WITH_AS(extract_bands(x, {}), doctest::Contains("empty"), ValueError);
}

TEST_CASE("frobenius norm matches the direct sum") {
    Cube x(1, 2, 1);
    x(0, 0, 0) = 3.0;
    x(0, 1, 0) = 4.0;
    CHECK(frobenius_norm(x) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("all_finite flags NaN and infinity") {
    Cube x(2, 2, 1);
    CHECK(x.all_finite());
    x(0, 1, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_FALSE(x.all_finite());
    x(0, 1, 0) = std::numeric_limits<double>::infinity();
    CHECK_FALSE(x.all_finite());
}

TEST_CASE("transposed and identity behave") {
    Mat a(2, 3);
    a(0, 0) = 1;
    a(1, 2) = 7;
    const Mat t = a.transposed();
    CHECK(t.rows() == 3);
    CHECK(t(2, 1) == 7);
    const Mat i3 = Mat::identity(3);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) CHECK(i3(r, c) == (r == c ? 1.0 : 0.0));
}
