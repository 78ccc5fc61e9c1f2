#pragma once

#include <cstddef>

#include "hirdiff/degradation.hpp"
#include "hirdiff/schedule.hpp"
#include "hirdiff/tensor.hpp"

namespace hirdiff {

/// How the guidance strength s(t) depends on the schedule position.
struct StrengthRule {
    enum class Kind { Constant, SqrtOneMinusAlphaBar };
    Kind kind = Kind::Constant;
    double scale = 1.0;

    double operator()(double alpha_bar) const;
};

/// Weights of the data-consistency objective steering the sampler:
/// loss(a0) = lambda * ||H(a0 x_3 e) - y||_F^2 + beta * TV(a0 x_3 e).
/// tv_delta is the Charbonnier smoothing width (the TV term is
/// differentiable everywhere for tv_delta > 0).
struct GuidanceConfig {
    double lambda = 1.0;
    double beta = 0.05;
    double tv_delta = 1e-3;
    StrengthRule strength;
};

/// Task presets: denoising keeps lambda = 1; super-resolution and
/// inpainting weight fidelity harder (lambda = 10). beta = 0.05 throughout.
GuidanceConfig denoise_preset();
GuidanceConfig sr_preset();
GuidanceConfig inpaint_preset();

/// Anisotropic Charbonnier total variation over spatial forward
/// differences, summed across bands. Zero iff every band is spatially
/// constant. delta must be positive.
double tv_norm(const Cube& x, double delta);

/// The guidance objective at reduced image a0 with coefficients e and
/// observation y under degradation op.
double guidance_loss(const Cube& a0, const Mat& e, const Cube& y,
                     const DegradationOp& op, const GuidanceConfig& cfg);

/// Analytic gradient of guidance_loss with respect to a0:
/// 2 lambda * adjoint(H(a0 x_3 e) - y) x_3 e^T + beta * tv'(a0 x_3 e) x_3 e^T.
Cube guidance_gradient(const Cube& a0, const Mat& e, const Cube& y,
                       const DegradationOp& op, const GuidanceConfig& cfg);

} // namespace hirdiff
