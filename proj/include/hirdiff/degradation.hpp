#pragma once

#include <cstddef>
#include <cstdint>

#include "hirdiff/tensor.hpp"

namespace hirdiff {

/// Linear degradation H applied band by band, plus the Gaussian noise level
/// used when simulating observations (sigma is in [0,255] units; the noise
/// itself is added separately by add_gaussian_noise).
///
/// Kinds:
///  - Identity: y = x (denoising; only noise degrades the cube).
///  - BlurDownsample: reflective-boundary correlation with a normalized
///    kernel followed by stride-`scale` decimation (super-resolution).
///  - Mask: elementwise product with a 0/1 cube (inpainting).
class DegradationOp {
public:
    enum class Kind { Identity, BlurDownsample, Mask };

    static DegradationOp identity(double sigma255 = 0.0);
    /// kernel must be square, odd-sized, and sum to 1; scale >= 1.
    static DegradationOp blur_downsample(Mat kernel, std::size_t scale, double sigma255 = 0.0);
    /// mask entries must all be 0 or 1.
    static DegradationOp masked(Cube mask, double sigma255 = 0.0);

    Kind kind() const { return kind_; }
    double sigma255() const { return sigma255_; }
    std::size_t scale() const { return scale_; }
    const Mat& kernel() const { return kernel_; }
    const Cube& mask() const { return mask_; }

    /// Forward operator. BlurDownsample requires h and w divisible by scale
    /// and returns an (h/scale) x (w/scale) x B cube; the other kinds keep
    /// the shape.
    Cube apply(const Cube& x) const;

    /// Exact adjoint of apply: <apply(x), y> == <x, adjoint(y)> to rounding.
    Cube adjoint(const Cube& y) const;

    /// Spatial shape of apply's output for an h x w input.
    void output_shape(std::size_t h, std::size_t w, std::size_t& oh, std::size_t& ow) const;
    /// Full-resolution shape recovering h x w from an observed oh x ow.
    void input_shape(std::size_t oh, std::size_t ow, std::size_t& h, std::size_t& w) const;

private:
    Kind kind_ = Kind::Identity;
    double sigma255_ = 0.0;
    Mat kernel_;
    std::size_t scale_ = 1;
    Cube mask_;
};

/// Normalized isotropic Gaussian kernel; size must be odd, std positive.
/// Entries sum to 1 and the kernel is symmetric under all square symmetries.
Mat gaussian_kernel(std::size_t size, double stddev);

/// 0/1 cube with exactly floor(rate * h * w * b) zeros placed uniformly at
/// random (seeded); rate must lie in [0, 1).
Cube random_mask(std::size_t h, std::size_t w, std::size_t b, double rate, std::uint64_t seed);

/// x plus iid Gaussian noise of standard deviation sigma255/255 (no clamping).
Cube add_gaussian_noise(const Cube& x, double sigma255, std::uint64_t seed);

} // namespace hirdiff
