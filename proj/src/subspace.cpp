#include "hirdiff/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hirdiff/errors.hpp"

namespace hirdiff {

namespace {

std::string index_list(const std::vector<std::size_t>& idx) {
    std::string s = "(";
    for (std::size_t i = 0; i < idx.size(); ++i)
        s += (i ? "," : "") + std::to_string(idx[i]);
    return s + ")";
}

} // namespace

SubspaceEstimate estimate_coefficients(const Cube& y, std::size_t k, double f) {
    if (k == 0 || k > y.bands())
        throw ValueError("estimate_coefficients: rank " + std::to_string(k) +
                         " outside [1, " + std::to_string(y.bands()) + "]");
    SubspaceEstimate est;
    est.v = truncated_svd(unfold3(y).transposed(), k).v; // B x k
    est.band_indices = rrqr_select(est.v.transposed(), f).selected;

    Mat vs(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) vs(i, j) = est.v(est.band_indices[i], j);
    est.det_vs = det_abs(vs);

    // e = v * vs^{-1}, via vs^T e^T = v^T.
    Mat etrans;
    try {
        etrans = solve_square(vs.transposed(), est.v.transposed());
    } catch (const NumericalError& ex) {
        throw NumericalError("estimate_coefficients: selected bands " +
                             index_list(est.band_indices) + " are degenerate: " + ex.what());
    }
    est.e = etrans.transposed();
    est.max_abs_e = 0.0;
    for (double v : est.e.values()) est.max_abs_e = std::max(est.max_abs_e, std::abs(v));
    return est;
}

Mat estimate_coefficients_least_squares(const Cube& y,
                                        const std::vector<std::size_t>& band_indices) {
    const Cube a = extract_bands(y, band_indices);
    const std::size_t k = band_indices.size();
    const std::size_t hw = y.h() * y.w();
    const double* ad = a.data();
    // Normal equations on the mode-3 unfolding: (A A^T) e^T = A Y^T.
    Mat gram(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            double s = 0.0;
            for (std::size_t p = 0; p < hw; ++p) s += ad[i * hw + p] * ad[j * hw + p];
            gram(i, j) = s;
        }
    Mat rhs(k, y.bands());
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t b = 0; b < y.bands(); ++b) {
            double s = 0.0;
            const double* yb = y.plane(b);
            for (std::size_t p = 0; p < hw; ++p) s += ad[i * hw + p] * yb[p];
            rhs(i, b) = s;
        }
    Mat etrans;
    try {
        etrans = solve_square(gram, rhs);
    } catch (const NumericalError& ex) {
        throw NumericalError("estimate_coefficients_least_squares: bands " +
                             index_list(band_indices) + " give a degenerate normal matrix: " +
                             ex.what());
    }
    return etrans.transposed();
}

Cube reconstruct(const Cube& a, const Mat& e) {
    return mode3_multiply(a, e);
}

Cube reconstruct_clamped(const Cube& a, const Mat& e, double lo, double hi) {
    Cube x = mode3_multiply(a, e);
    for (std::size_t i = 0; i < x.size(); ++i)
        x.data()[i] = std::clamp(x.data()[i], lo, hi);
    return x;
}

} // namespace hirdiff
