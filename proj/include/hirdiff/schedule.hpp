#pragma once

#include <cstddef>
#include <vector>

namespace hirdiff {

/// Precomputed diffusion schedule: alpha_bar(1..T), each in (0, 1],
/// non-increasing in t (strictly decreasing for the named constructors with
/// non-degenerate parameters). t = 1 is the cleanest state, t = T the
/// noisiest; reverse sampling walks t = T..1 and treats alpha_bar(0) as 1.
class NoiseSchedule {
public:
    enum class Kind { Exponential, Linear, Cosine };

    NoiseSchedule(Kind kind, std::vector<double> alphas);

    Kind kind() const { return kind_; }
    std::size_t steps() const { return alphas_.size(); }

    /// alpha_bar at step t, 1-indexed.
    double alpha_bar(std::size_t t) const;
    /// alpha_bar at step t-1, with the t = 1 boundary pinned to 1.
    double alpha_bar_prev(std::size_t t) const;

    const std::vector<double>& alphas() const { return alphas_; }

private:
    Kind kind_;
    std::vector<double> alphas_;
};

/// Exponential schedule: the remaining noise fraction decays as
/// e^{-k (T-t)/T}, so alpha_bar rises fast over the first reverse steps and
/// flattens near the clean end. The raw sequence 1 - e^{-k (T-t)/T} is
/// min-max normalized onto [floor, 1], making alpha_bar(1) == 1 and
/// alpha_bar(T) == floor exact. t_steps >= 2, k > 0, floor in (0, 1).
NoiseSchedule exponential_schedule(std::size_t t_steps, double k = 6.0, double floor = 1e-4);

/// Baseline with beta_t linear from beta_start to beta_end across the T
/// steps and alpha_bar_t the running product of (1 - beta_s). The defaults
/// compress a full forward process into T steps (alpha_bar(T) ~ 1e-5ish for
/// T = 20). beta values must lie in [0, 1); beta == 0 is the degenerate
/// all-ones limit.
NoiseSchedule linear_schedule(std::size_t t_steps, double beta_start = 0.02,
                              double beta_end = 0.8);

/// Squared-cosine baseline: alpha_bar_t = f(t)/f(0) with
/// f(t) = cos^2((t/T + 0.008)/1.008 * pi/2), per-step beta clipped at 0.999.
NoiseSchedule cosine_schedule(std::size_t t_steps);

} // namespace hirdiff
