#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "hirdiff/degradation.hpp"
#include "hirdiff/guidance.hpp"
#include "hirdiff/schedule.hpp"
#include "hirdiff/subspace.hpp"
#include "hirdiff/tensor.hpp"

namespace hirdiff {

/// Noise predictor driving the reverse process. Implementations must be
/// deterministic functions of their inputs and return a cube of a_t's shape
/// with finite samples.
class Denoiser {
public:
    virtual ~Denoiser() = default;
    virtual Cube predict_noise(const Cube& a_t, std::size_t t, double alpha_bar) = 0;
};

/// Exact noise for a known clean reduced image:
/// eps = (a_t - sqrt(alpha_bar) * clean) / sqrt(1 - alpha_bar);
/// alpha_bar == 1 returns the zero cube (a_t is already clean).
class OracleDenoiser final : public Denoiser {
public:
    explicit OracleDenoiser(Cube clean);
    Cube predict_noise(const Cube& a_t, std::size_t t, double alpha_bar) override;

private:
    Cube clean_;
};

/// Training-free surrogate: estimates x0 by Gaussian-smoothing a_t /
/// sqrt(alpha_bar) per channel, then inverts the forward identity to emit
/// eps. With a tiny smoothing std the kernel degenerates to identity and
/// the predictor returns pure rescaled innovation.
class SmoothingDenoiser final : public Denoiser {
public:
    explicit SmoothingDenoiser(double smooth_std);
    Cube predict_noise(const Cube& a_t, std::size_t t, double alpha_bar) override;

private:
    Mat kernel_;
};

/// Everything run_restoration needs besides the observation: schedule and
/// guidance settings, subspace rank/threshold, RNG seed for the initial
/// noise cube, the noise predictor, and the optional x0 clamp.
struct SamplerConfig {
    NoiseSchedule schedule;
    GuidanceConfig guidance;
    std::size_t rank = 3;
    double rrqr_f = 1.05;
    std::uint64_t seed = 0;
    std::shared_ptr<Denoiser> denoiser;
    bool clamp_x0 = false;
    double clamp_lo = -1.0;
    double clamp_hi = 3.0;
};

/// Output bundle: the restored cube (exactly reconstruct(a0, e)), the final
/// reduced image, the estimated coefficients, the selected bands, and the
/// guidance loss recorded at each of the T steps (index 0 is t = T).
struct RestorationResult {
    Cube x0;
    Cube a0;
    Mat e;
    std::vector<std::size_t> band_indices;
    std::vector<double> per_step_loss;
};

/// x0 estimate from the forward identity:
/// (a_t - sqrt(1 - alpha_bar) * eps) / sqrt(alpha_bar); alpha_bar in (0, 1].
Cube predict_x0(const Cube& a_t, const Cube& eps, double alpha_bar);

/// Deterministic DDIM update toward alpha_bar_prev >= alpha_bar_t:
/// sqrt(alpha_bar_prev) * x0_hat + sqrt(1 - alpha_bar_prev) * eps_hat,
/// with x0_hat recomputed from eps_hat.
Cube ddim_step(const Cube& a_t, const Cube& eps_hat, double alpha_bar_t, double alpha_bar_prev);

/// Denoiser output shifted by the scaled guidance gradient:
/// eps_theta + s(t) / sqrt(alpha_bar_t) * guidance_gradient(x0_hat, ...),
/// where x0_hat = predict_x0(a_t, eps_theta, alpha_bar_t).
Cube guided_epsilon(const Cube& a_t, const Cube& eps_theta, double alpha_bar_t,
                    const Mat& e, const Cube& y, const DegradationOp& op,
                    const GuidanceConfig& cfg);

/// Full restoration: estimates the coefficient matrix from y, seeds the
/// reduced image with standard normal noise, runs the guided reverse loop
/// t = T..1, and reconstructs. Errors are annotated with the failing stage
/// and, inside the loop, the step index.
RestorationResult run_restoration(const Cube& y, const DegradationOp& op, SamplerConfig cfg);

} // namespace hirdiff
