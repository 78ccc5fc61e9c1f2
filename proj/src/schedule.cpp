#include "hirdiff/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hirdiff/errors.hpp"

namespace hirdiff {

NoiseSchedule::NoiseSchedule(Kind kind, std::vector<double> alphas)
    : kind_(kind), alphas_(std::move(alphas)) {
    if (alphas_.empty()) throw ValueError("NoiseSchedule: empty alpha sequence");
    double prev = 1.0 + 1e-15;
    for (std::size_t i = 0; i < alphas_.size(); ++i) {
        const double a = alphas_[i];
        if (!(a > 0.0 && a <= 1.0))
            throw ValueError("NoiseSchedule: alpha_bar(" + std::to_string(i + 1) + ") = " +
                             std::to_string(a) + " outside (0, 1]");
        if (a > prev)
            throw ValueError("NoiseSchedule: alpha_bar increases at t = " + std::to_string(i + 1));
        prev = a;
    }
}

double NoiseSchedule::alpha_bar(std::size_t t) const {
    if (t < 1 || t > alphas_.size())
        throw ValueError("alpha_bar: t = " + std::to_string(t) + " outside [1, " +
                         std::to_string(alphas_.size()) + "]");
    return alphas_[t - 1];
}

double NoiseSchedule::alpha_bar_prev(std::size_t t) const {
    if (t < 1 || t > alphas_.size())
        throw ValueError("alpha_bar_prev: t = " + std::to_string(t) + " outside [1, " +
                         std::to_string(alphas_.size()) + "]");
    return t == 1 ? 1.0 : alphas_[t - 2];
}

NoiseSchedule exponential_schedule(std::size_t t_steps, double k, double floor) {
    if (t_steps < 2) throw ValueError("exponential_schedule: need at least 2 steps");
    if (!(k > 0.0)) throw ValueError("exponential_schedule: k must be positive");
    if (!(floor > 0.0 && floor < 1.0))
        throw ValueError("exponential_schedule: floor must lie in (0, 1)");
    const double T = static_cast<double>(t_steps);
    std::vector<double> raw(t_steps);
    for (std::size_t t = 1; t <= t_steps; ++t)
        raw[t - 1] = 1.0 - std::exp(-k * (T - static_cast<double>(t)) / T);
    const double lo = raw.back();  // 0 at t = T
    const double hi = raw.front(); // largest at t = 1
    std::vector<double> alphas(t_steps);
    for (std::size_t i = 0; i < t_steps; ++i)
        alphas[i] = (raw[i] - lo) / (hi - lo) * (1.0 - floor) + floor;
    alphas.front() = 1.0;  // normalization endpoints, exact
    alphas.back() = floor;
    return NoiseSchedule(NoiseSchedule::Kind::Exponential, std::move(alphas));
}

NoiseSchedule linear_schedule(std::size_t t_steps, double beta_start, double beta_end) {
    if (t_steps < 2) throw ValueError("linear_schedule: need at least 2 steps");
    for (double b : {beta_start, beta_end})
        if (!(b >= 0.0 && b < 1.0))
            throw ValueError("linear_schedule: beta " + std::to_string(b) + " outside [0, 1)");
    std::vector<double> alphas(t_steps);
    double prod = 1.0;
    for (std::size_t t = 1; t <= t_steps; ++t) {
        const double frac = static_cast<double>(t - 1) / static_cast<double>(t_steps - 1);
        const double beta = beta_start + frac * (beta_end - beta_start);
        prod *= 1.0 - beta;
        alphas[t - 1] = prod;
    }
    return NoiseSchedule(NoiseSchedule::Kind::Linear, std::move(alphas));
}

NoiseSchedule cosine_schedule(std::size_t t_steps) {
    if (t_steps < 2) throw ValueError("cosine_schedule: need at least 2 steps");
    const double T = static_cast<double>(t_steps);
    const double s = 0.008;
    auto f = [&](double t) {
        const double x = (t / T + s) / (1.0 + s) * (3.14159265358979323846 / 2.0);
        const double c = std::cos(x);
        return c * c;
    };
    const double f0 = f(0.0);
    std::vector<double> alphas(t_steps);
    double prev = 1.0;
    for (std::size_t t = 1; t <= t_steps; ++t) {
        const double raw = f(static_cast<double>(t)) / f0;
        double beta = 1.0 - raw / prev;
        beta = std::clamp(beta, 0.0, 0.999);
        prev *= 1.0 - beta;
        alphas[t - 1] = prev;
    }
    return NoiseSchedule(NoiseSchedule::Kind::Cosine, std::move(alphas));
}

} // namespace hirdiff
