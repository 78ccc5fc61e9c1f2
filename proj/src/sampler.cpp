#include "hirdiff/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hirdiff/errors.hpp"
#include "hirdiff/kernels.hpp"
#include "hirdiff/rng.hpp"

namespace hirdiff {

namespace {

void check_alpha(double alpha_bar, const char* who) {
    if (!(alpha_bar > 0.0 && alpha_bar <= 1.0))
        throw ValueError(std::string(who) + ": alpha_bar = " + std::to_string(alpha_bar) +
                         " outside (0, 1]");
}

} // namespace

OracleDenoiser::OracleDenoiser(Cube clean) : clean_(std::move(clean)) {}

Cube OracleDenoiser::predict_noise(const Cube& a_t, std::size_t, double alpha_bar) {
    check_alpha(alpha_bar, "OracleDenoiser");
    if (!a_t.same_shape(clean_))
        throw ShapeError("OracleDenoiser: a_t shape differs from the clean reference");
    if (alpha_bar == 1.0) return Cube(a_t.h(), a_t.w(), a_t.bands());
    Cube eps(a_t.h(), a_t.w(), a_t.bands());
    const double sa = std::sqrt(alpha_bar);
    const double inv = 1.0 / std::sqrt(1.0 - alpha_bar);
    kernels::axpby(eps.data(), inv, a_t.data(), -sa * inv, clean_.data(), eps.size());
    return eps;
}

SmoothingDenoiser::SmoothingDenoiser(double smooth_std) {
    if (!(smooth_std > 0.0)) throw ValueError("SmoothingDenoiser: std must be positive");
    std::size_t size = 2 * static_cast<std::size_t>(std::ceil(3.0 * smooth_std)) + 1;
    kernel_ = gaussian_kernel(size, smooth_std);
}

Cube SmoothingDenoiser::predict_noise(const Cube& a_t, std::size_t, double alpha_bar) {
    check_alpha(alpha_bar, "SmoothingDenoiser");
    if (alpha_bar == 1.0) return Cube(a_t.h(), a_t.w(), a_t.bands());
    const double sa = std::sqrt(alpha_bar);
    Cube scaled = a_t;
    kernels::axpby(scaled.data(), 1.0 / sa, a_t.data(), 0.0, a_t.data(), scaled.size());
    Cube x0(a_t.h(), a_t.w(), a_t.bands());
    kernels::conv_cube(x0.data(), scaled.data(), a_t.h(), a_t.w(), a_t.bands(),
                       kernel_.data(), kernel_.rows());
    Cube eps(a_t.h(), a_t.w(), a_t.bands());
    const double inv = 1.0 / std::sqrt(1.0 - alpha_bar);
    kernels::axpby(eps.data(), inv, a_t.data(), -sa * inv, x0.data(), eps.size());
    return eps;
}

Cube predict_x0(const Cube& a_t, const Cube& eps, double alpha_bar) {
    check_alpha(alpha_bar, "predict_x0");
    if (!a_t.same_shape(eps)) throw ShapeError("predict_x0: a_t and eps shapes differ");
    Cube x0(a_t.h(), a_t.w(), a_t.bands());
    const double inv = 1.0 / std::sqrt(alpha_bar);
    kernels::axpby(x0.data(), inv, a_t.data(), -std::sqrt(1.0 - alpha_bar) * inv, eps.data(),
                   x0.size());
    return x0;
}

Cube ddim_step(const Cube& a_t, const Cube& eps_hat, double alpha_bar_t, double alpha_bar_prev) {
    check_alpha(alpha_bar_t, "ddim_step");
    check_alpha(alpha_bar_prev, "ddim_step");
    if (alpha_bar_prev < alpha_bar_t)
        throw ValueError("ddim_step: alpha_bar_prev = " + std::to_string(alpha_bar_prev) +
                         " below alpha_bar_t = " + std::to_string(alpha_bar_t) +
                         " (schedule must be non-increasing in t)");
    const Cube x0 = predict_x0(a_t, eps_hat, alpha_bar_t);
    Cube out(a_t.h(), a_t.w(), a_t.bands());
    kernels::axpby(out.data(), std::sqrt(alpha_bar_prev), x0.data(),
                   std::sqrt(1.0 - alpha_bar_prev), eps_hat.data(), out.size());
    return out;
}

Cube guided_epsilon(const Cube& a_t, const Cube& eps_theta, double alpha_bar_t,
                    const Mat& e, const Cube& y, const DegradationOp& op,
                    const GuidanceConfig& cfg) {
    const Cube x0 = predict_x0(a_t, eps_theta, alpha_bar_t);
    const double s = cfg.strength(alpha_bar_t);
    if (s == 0.0) return eps_theta;
    const Cube grad = guidance_gradient(x0, e, y, op, cfg);
    Cube out(a_t.h(), a_t.w(), a_t.bands());
    kernels::axpby(out.data(), 1.0, eps_theta.data(), s / std::sqrt(alpha_bar_t), grad.data(),
                   out.size());
    return out;
}

RestorationResult run_restoration(const Cube& y, const DegradationOp& op, SamplerConfig cfg) {
    if (!cfg.denoiser) throw ValueError("run_restoration: no denoiser configured");
    const std::size_t T = cfg.schedule.steps();

    RestorationResult res;
    SubspaceEstimate est;
    try {
        est = estimate_coefficients(y, cfg.rank, cfg.rrqr_f);
    } catch (const Error& ex) {
        throw NumericalError("run_restoration: coefficient estimation failed: " +
                             std::string(ex.what()));
    }
    res.e = est.e;
    res.band_indices = est.band_indices;

    std::size_t h = 0, w = 0;
    op.input_shape(y.h(), y.w(), h, w);

    Cube a(h, w, cfg.rank);
    {
        Rng rng(substream(cfg.seed, "init"));
        for (std::size_t i = 0; i < a.size(); ++i) a.data()[i] = rng.normal();
    }

    res.per_step_loss.assign(T, 0.0);
    for (std::size_t t = T; t >= 1; --t) {
        const double ab = cfg.schedule.alpha_bar(t);
        const double ab_prev = cfg.schedule.alpha_bar_prev(t);
        try {
            Cube eps = cfg.denoiser->predict_noise(a, t, ab);
            if (!eps.same_shape(a) || !eps.all_finite())
                throw NumericalError("denoiser output is malformed");
            Cube x0 = predict_x0(a, eps, ab);
            if (cfg.clamp_x0)
                for (std::size_t i = 0; i < x0.size(); ++i)
                    x0.data()[i] = std::clamp(x0.data()[i], cfg.clamp_lo, cfg.clamp_hi);
            res.per_step_loss[T - t] = guidance_loss(x0, res.e, y, op, cfg.guidance);
            const double s = cfg.guidance.strength(ab);
            Cube eps_hat = eps;
            if (s != 0.0) {
                const Cube grad = guidance_gradient(x0, res.e, y, op, cfg.guidance);
                kernels::axpby(eps_hat.data(), 1.0, eps.data(), s / std::sqrt(ab), grad.data(),
                               eps_hat.size());
            }
            a = ddim_step(a, eps_hat, ab, ab_prev);
        } catch (const Error& ex) {
            throw NumericalError("run_restoration: step " + std::to_string(T - t + 1) + " (t = " +
                                 std::to_string(t) + "): " + ex.what());
        }
    }

    res.a0 = std::move(a);
    if (cfg.clamp_x0)
        for (std::size_t i = 0; i < res.a0.size(); ++i)
            res.a0.data()[i] = std::clamp(res.a0.data()[i], cfg.clamp_lo, cfg.clamp_hi);
    res.x0 = reconstruct(res.a0, res.e);
    return res;
}

} // namespace hirdiff
