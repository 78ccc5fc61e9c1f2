#include "hirdiff/guidance.hpp"

#include <cmath>
#include <string>

#include "hirdiff/errors.hpp"
#include "hirdiff/kernels.hpp"
#include "hirdiff/subspace.hpp"

namespace hirdiff {

double StrengthRule::operator()(double alpha_bar) const {
    switch (kind) {
    case Kind::Constant:
        return scale;
    case Kind::SqrtOneMinusAlphaBar:
        return scale * std::sqrt(1.0 - alpha_bar);
    }
    return scale;
}

GuidanceConfig denoise_preset() { return GuidanceConfig{1.0, 0.05, 1e-3, {}}; }
GuidanceConfig sr_preset() { return GuidanceConfig{10.0, 0.05, 1e-3, {}}; }
GuidanceConfig inpaint_preset() { return GuidanceConfig{10.0, 0.05, 1e-3, {}}; }

double tv_norm(const Cube& x, double delta) {
    if (!(delta > 0.0)) throw ValueError("tv_norm: delta must be positive");
    return kernels::tv_value(x.data(), x.h(), x.w(), x.bands(), delta);
}

namespace {

void check_weights(const GuidanceConfig& cfg) {
    if (cfg.lambda < 0.0 || cfg.beta < 0.0)
        throw ValueError("guidance: lambda and beta must be non-negative");
    if (!(cfg.tv_delta > 0.0)) throw ValueError("guidance: tv_delta must be positive");
}

Cube residual(const Cube& a0, const Mat& e, const Cube& y, const DegradationOp& op) {
    Cube hx = op.apply(reconstruct(a0, e));
    if (!hx.same_shape(y))
        throw ShapeError("guidance: degraded reconstruction is " + std::to_string(hx.h()) + "x" +
                         std::to_string(hx.w()) + "x" + std::to_string(hx.bands()) +
                         ", observation is " + std::to_string(y.h()) + "x" + std::to_string(y.w()) +
                         "x" + std::to_string(y.bands()));
    kernels::axpby(hx.data(), 1.0, hx.data(), -1.0, y.data(), hx.size());
    return hx;
}

} // namespace

double guidance_loss(const Cube& a0, const Mat& e, const Cube& y,
                     const DegradationOp& op, const GuidanceConfig& cfg) {
    check_weights(cfg);
    const Cube r = residual(a0, e, y, op);
    double loss = cfg.lambda * kernels::sumsq(r.data(), r.size());
    if (cfg.beta > 0.0) loss += cfg.beta * tv_norm(reconstruct(a0, e), cfg.tv_delta);
    return loss;
}

Cube guidance_gradient(const Cube& a0, const Mat& e, const Cube& y,
                       const DegradationOp& op, const GuidanceConfig& cfg) {
    check_weights(cfg);
    const Mat et = e.transposed();
    // Fidelity: d/dX ||H(X) - y||^2 = 2 H^T(H(X) - y), then chain through
    // X = a0 x_3 e.
    Cube grad_x = op.adjoint(residual(a0, e, y, op));
    const double two_lambda = 2.0 * cfg.lambda;
    kernels::axpby(grad_x.data(), two_lambda, grad_x.data(), 0.0, grad_x.data(), grad_x.size());
    if (cfg.beta > 0.0) {
        const Cube x = reconstruct(a0, e);
        Cube tvg(x.h(), x.w(), x.bands());
        kernels::tv_grad(tvg.data(), x.data(), x.h(), x.w(), x.bands(), cfg.tv_delta);
        kernels::axpby(grad_x.data(), 1.0, grad_x.data(), cfg.beta, tvg.data(), grad_x.size());
    }
    return mode3_multiply(grad_x, et);
}

} // namespace hirdiff
