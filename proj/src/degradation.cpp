#include "hirdiff/degradation.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "hirdiff/errors.hpp"
#include "hirdiff/kernels.hpp"
#include "hirdiff/rng.hpp"

namespace hirdiff {

DegradationOp DegradationOp::identity(double sigma255) {
    DegradationOp op;
    op.kind_ = Kind::Identity;
    op.sigma255_ = sigma255;
    return op;
}

DegradationOp DegradationOp::blur_downsample(Mat kernel, std::size_t scale, double sigma255) {
    if (kernel.rows() != kernel.cols() || kernel.rows() % 2 == 0)
        throw ValueError("blur_downsample: kernel must be square and odd-sized, got " +
                         std::to_string(kernel.rows()) + " x " + std::to_string(kernel.cols()));
    double sum = 0.0;
    for (double v : kernel.values()) sum += v;
    if (std::abs(sum - 1.0) > 1e-9)
        throw ValueError("blur_downsample: kernel sums to " + std::to_string(sum) + ", expected 1");
    if (scale == 0) throw ValueError("blur_downsample: scale must be >= 1");
    DegradationOp op;
    op.kind_ = Kind::BlurDownsample;
    op.kernel_ = std::move(kernel);
    op.scale_ = scale;
    op.sigma255_ = sigma255;
    return op;
}

DegradationOp DegradationOp::masked(Cube mask, double sigma255) {
    for (double v : mask.values())
        if (v != 0.0 && v != 1.0)
            throw ValueError("masked: mask entries must be exactly 0 or 1");
    DegradationOp op;
    op.kind_ = Kind::Mask;
    op.mask_ = std::move(mask);
    op.sigma255_ = sigma255;
    return op;
}

void DegradationOp::output_shape(std::size_t h, std::size_t w,
                                 std::size_t& oh, std::size_t& ow) const {
    if (kind_ == Kind::BlurDownsample) {
        if (h % scale_ != 0 || w % scale_ != 0)
            throw ShapeError("blur_downsample: " + std::to_string(h) + " x " + std::to_string(w) +
                             " not divisible by scale " + std::to_string(scale_));
        oh = h / scale_;
        ow = w / scale_;
    } else {
        oh = h;
        ow = w;
    }
}

void DegradationOp::input_shape(std::size_t oh, std::size_t ow,
                                std::size_t& h, std::size_t& w) const {
    if (kind_ == Kind::BlurDownsample) {
        h = oh * scale_;
        w = ow * scale_;
    } else {
        h = oh;
        w = ow;
    }
}

Cube DegradationOp::apply(const Cube& x) const {
    switch (kind_) {
    case Kind::Identity:
        return x;
    case Kind::BlurDownsample: {
        std::size_t oh = 0, ow = 0;
        output_shape(x.h(), x.w(), oh, ow);
        Cube blurred(x.h(), x.w(), x.bands());
        kernels::conv_cube(blurred.data(), x.data(), x.h(), x.w(), x.bands(),
                           kernel_.data(), kernel_.rows());
        Cube out(oh, ow, x.bands());
        kernels::decimate_cube(out.data(), blurred.data(), x.h(), x.w(), x.bands(), scale_);
        return out;
    }
    case Kind::Mask: {
        if (!mask_.same_shape(x))
            throw ShapeError("mask apply: mask is " + std::to_string(mask_.h()) + "x" +
                             std::to_string(mask_.w()) + "x" + std::to_string(mask_.bands()) +
                             ", input is " + std::to_string(x.h()) + "x" + std::to_string(x.w()) +
                             "x" + std::to_string(x.bands()));
        Cube out(x.h(), x.w(), x.bands());
        for (std::size_t i = 0; i < x.size(); ++i)
            out.data()[i] = mask_.data()[i] * x.data()[i];
        return out;
    }
    }
    throw Error("unreachable degradation kind");
}

Cube DegradationOp::adjoint(const Cube& y) const {
    switch (kind_) {
    case Kind::Identity:
        return y;
    case Kind::BlurDownsample: {
        std::size_t h = 0, w = 0;
        input_shape(y.h(), y.w(), h, w);
        Cube up(h, w, y.bands());
        kernels::upsample_zero_cube(up.data(), y.data(), h, w, y.bands(), scale_);
        Cube out(h, w, y.bands());
        kernels::conv_adjoint_cube(out.data(), up.data(), h, w, y.bands(),
                                   kernel_.data(), kernel_.rows());
        return out;
    }
    case Kind::Mask:
        // Diagonal 0/1 operator is self-adjoint.
        return apply(y);
    }
    throw Error("unreachable degradation kind");
}

Mat gaussian_kernel(std::size_t size, double stddev) {
    if (size % 2 == 0 || size == 0)
        throw ValueError("gaussian_kernel: size must be odd, got " + std::to_string(size));
    if (!(stddev > 0.0))
        throw ValueError("gaussian_kernel: stddev must be positive");
    Mat k(size, size);
    const double c = static_cast<double>(size / 2);
    double sum = 0.0;
    for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = 0; j < size; ++j) {
            const double dy = static_cast<double>(i) - c;
            const double dx = static_cast<double>(j) - c;
            k(i, j) = std::exp(-(dx * dx + dy * dy) / (2.0 * stddev * stddev));
            sum += k(i, j);
        }
    for (std::size_t i = 0; i < size * size; ++i) k.data()[i] /= sum;
    return k;
}

Cube random_mask(std::size_t h, std::size_t w, std::size_t b, double rate, std::uint64_t seed) {
    if (!(rate >= 0.0 && rate < 1.0))
        throw ValueError("random_mask: rate must lie in [0, 1), got " + std::to_string(rate));
    const std::size_t n = h * w * b;
    const std::size_t zeros = static_cast<std::size_t>(rate * static_cast<double>(n));
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(seed);
    // Partial Fisher-Yates: the first `zeros` slots end up as a uniform
    // sample without replacement.
    for (std::size_t i = 0; i < zeros; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(n - i));
        std::swap(idx[i], idx[j]);
    }
    Cube mask(h, w, b, std::vector<double>(n, 1.0));
    for (std::size_t i = 0; i < zeros; ++i) mask.data()[idx[i]] = 0.0;
    return mask;
}

Cube add_gaussian_noise(const Cube& x, double sigma255, std::uint64_t seed) {
    if (sigma255 < 0.0) throw ValueError("add_gaussian_noise: sigma must be non-negative");
    Cube out = x;
    if (sigma255 == 0.0) return out;
    const double sigma = sigma255 / 255.0;
    Rng rng(seed);
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += sigma * rng.normal();
    return out;
}

} // namespace hirdiff
